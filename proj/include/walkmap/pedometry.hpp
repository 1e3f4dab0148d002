// Pedometry: step detection from the acceleration-magnitude pattern, heading
// from complementary magnetometer/gyro fusion, and dead reckoning
//   pos_k = pos_{k-1} + S * (cos theta, sin theta).
//
// Step detection is magnitude-based and therefore independent of device
// orientation: a step is a smoothed-|a| excursion above g + peak_thresh
// followed within max_step_interval by one below g - valley_thresh.

#ifndef WALKMAP_PEDOMETRY_HPP
#define WALKMAP_PEDOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "walkmap/config.hpp"
#include "walkmap/core.hpp"
#include "walkmap/trace.hpp"

namespace walkmap {

struct StepEvent {
    TimestampMs t_peak = 0;
    TimestampMs t_valley = 0;
    double peak_mag = 0.0;    // m/s^2, smoothed
    double valley_mag = 0.0;  // m/s^2, smoothed
    double step_len = 0.0;    // meters
};

struct MagSample {
    TimestampMs t = 0;
    double mag = 0.0;  // m/s^2
};

// |a| per ACCEL sample, smoothed by a centered moving average over
// smooth_window_ms (centered, so peaks keep their timestamps).
inline std::vector<MagSample> accel_magnitude_series(const RawTrace& trace,
                                                     double smooth_window_ms) {
    std::vector<MagSample> raw;
    for (const SensorSample& s : trace.samples) {
        if (s.kind == SensorKind::ACCEL) raw.push_back({s.t, s.v.norm()});
    }
    if (raw.empty()) {
        throw DegenerateInputError("trace has no ACCEL samples");
    }
    if (smooth_window_ms <= 0.0) return raw;

    std::vector<double> prefix(raw.size() + 1, 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i) prefix[i + 1] = prefix[i] + raw[i].mag;

    std::vector<MagSample> out(raw.size());
    const double half = smooth_window_ms / 2.0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double t = static_cast<double>(raw[i].t);
        while (lo < raw.size() && static_cast<double>(raw[lo].t) < t - half) ++lo;
        if (hi < i + 1) hi = i + 1;
        while (hi < raw.size() && static_cast<double>(raw[hi].t) <= t + half) ++hi;
        out[i] = {raw[i].t, (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo)};
    }
    return out;
}

// Threshold-crossing scan: track the running max while the series sits above
// g + peak_thresh; once it falls back, hunt for the matching valley below
// g - valley_thresh within max_step_interval. Events never overlap.
inline std::vector<StepEvent> detect_steps(const std::vector<MagSample>& series,
                                           const PedometryConfig& cfg) {
    if (series.empty()) throw DegenerateInputError("empty magnitude series");
    const double hi = cfg.g + cfg.peak_thresh;
    const double lo = cfg.g - cfg.valley_thresh;

    std::vector<StepEvent> steps;
    enum class State { SeekPeak, InPeak, SeekValley, InValley } st = State::SeekPeak;
    StepEvent cur{};
    auto finish = [&]() {
        cur.step_len = cfg.default_step_len;
        steps.push_back(cur);
        st = State::SeekPeak;
    };
    for (const MagSample& s : series) {
        switch (st) {
            case State::SeekPeak:
                if (s.mag > hi) {
                    cur = {s.t, 0, s.mag, 0.0, 0.0};
                    st = State::InPeak;
                }
                break;
            case State::InPeak:
                if (s.mag > hi) {
                    if (s.mag > cur.peak_mag) {
                        cur.peak_mag = s.mag;
                        cur.t_peak = s.t;
                    }
                } else {
                    st = State::SeekValley;
                }
                [[fallthrough]];
            case State::SeekValley:
                if (st == State::SeekValley) {
                    if (s.t - cur.t_peak > static_cast<TimestampMs>(cfg.max_step_interval_ms)) {
                        st = s.mag > hi ? State::InPeak : State::SeekPeak;
                        if (st == State::InPeak) cur = {s.t, 0, s.mag, 0.0, 0.0};
                        break;
                    }
                    if (s.mag < lo) {
                        cur.t_valley = s.t;
                        cur.valley_mag = s.mag;
                        st = State::InValley;
                    }
                }
                break;
            case State::InValley:
                if (s.mag < lo) {
                    if (s.mag < cur.valley_mag) {
                        cur.valley_mag = s.mag;
                        cur.t_valley = s.t;
                    }
                } else {
                    finish();
                    if (s.mag > hi) {
                        cur = {s.t, 0, s.mag, 0.0, 0.0};
                        st = State::InPeak;
                    }
                }
                break;
        }
    }
    if (st == State::InValley) finish();
    return steps;
}

struct HeadingSample {
    TimestampMs t = 0;
    double theta = 0.0;  // radians, [-pi, pi)
    bool flagged = false;  // > 2 s since the last orientation sample
};

// Complementary-filter heading track over the whole trace.
//
// The gyro rate is projected onto the gravity direction (estimated by an
// exponential average of the accelerometer) and integrated; each magnetometer
// sample pulls the estimate toward the tilt-compensated magnetic bearing with
// weight (1 - heading_fuse_coeff). Convention: the horizontal magnetic field
// points toward heading 0 (+x east), so a device reading m = (+B, 0, *) means
// theta = 0.
class HeadingTrack {
public:
    HeadingTrack(const RawTrace& trace, const PedometryConfig& cfg) {
        constexpr double kGravityTauMs = 300.0;
        constexpr TimestampMs kGapMs = 2000;
        Vec3 g_acc{0, 0, 0};
        bool have_g = false;
        bool have_theta = false;
        double theta = 0.0;
        TimestampMs last_orient_t = 0;
        TimestampMs last_gyro_t = 0;
        bool have_gyro_t = false;

        for (const SensorSample& s : trace.samples) {
            switch (s.kind) {
                case SensorKind::ACCEL: {
                    if (!have_g) {
                        g_acc = s.v;
                        have_g = true;
                    } else {
                        const double w = 1.0 - std::exp(-1.0 / (kGravityTauMs / 20.0));
                        g_acc = {g_acc.x + w * (s.v.x - g_acc.x),
                                 g_acc.y + w * (s.v.y - g_acc.y),
                                 g_acc.z + w * (s.v.z - g_acc.z)};
                    }
                    break;
                }
                case SensorKind::GYRO: {
                    if (have_gyro_t && have_theta) {
                        const double dt = static_cast<double>(s.t - last_gyro_t) / 1000.0;
                        theta = normalize_heading(theta + up_rate(s.v, g_acc, have_g) * dt);
                        samples_.push_back({s.t, theta, false});
                        last_orient_t = s.t;
                    }
                    last_gyro_t = s.t;
                    have_gyro_t = true;
                    break;
                }
                case SensorKind::MAGNET: {
                    const double bearing = magnetic_bearing(s.v, g_acc, have_g);
                    if (!have_theta) {
                        theta = bearing;
                        have_theta = true;
                    } else {
                        theta = normalize_heading(
                            theta + (1.0 - cfg.heading_fuse_coeff) * heading_diff(bearing, theta));
                    }
                    samples_.push_back({s.t, theta, false});
                    last_orient_t = s.t;
                    break;
                }
                default:
                    break;
            }
        }
        (void)last_orient_t;
        // Mark samples that follow a > 2 s orientation gap as held/stale.
        for (std::size_t i = 1; i < samples_.size(); ++i) {
            if (samples_[i].t - samples_[i - 1].t > kGapMs) samples_[i].flagged = true;
        }
    }

    bool empty() const { return samples_.empty(); }

    // Heading at time t: the most recent estimate at or before t (zero-order
    // hold); flagged when that estimate is stale by more than 2 s.
    HeadingSample at(TimestampMs t) const {
        if (samples_.empty()) {
            throw DegenerateInputError("trace has no orientation samples");
        }
        auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](TimestampMs v, const HeadingSample& h) { return v < h.t; });
        if (it == samples_.begin()) {
            HeadingSample h = *it;
            h.flagged = (it->t - t) > 2000;
            return h;
        }
        HeadingSample h = *(it - 1);
        h.flagged = h.flagged || (t - h.t) > 2000;
        return h;
    }

    const std::vector<HeadingSample>& samples() const { return samples_; }

private:
    static double up_rate(const Vec3& omega, const Vec3& g_acc, bool have_g) {
        if (!have_g) return omega.z;
        const double n = g_acc.norm();
        if (n < 1e-9) return omega.z;
        return (omega.x * g_acc.x + omega.y * g_acc.y + omega.z * g_acc.z) / n;
    }

    // Tilt-compensated magnetic bearing of the device +x axis.
    static double magnetic_bearing(const Vec3& m, const Vec3& g_acc, bool have_g) {
        Vec3 up{0, 0, 1};
        if (have_g) {
            const double n = g_acc.norm();
            if (n > 1e-9) up = {g_acc.x / n, g_acc.y / n, g_acc.z / n};
        }
        // Horizontal basis: device x projected to the horizontal plane, and
        // its 90-degree CCW partner about `up`.
        Vec3 xh{1.0 - up.x * up.x, -up.x * up.y, -up.x * up.z};
        const double xn = xh.norm();
        if (xn < 1e-9) return 0.0;  // device x vertical; bearing undefined
        xh = {xh.x / xn, xh.y / xn, xh.z / xn};
        const Vec3 yh{up.y * xh.z - up.z * xh.y,
                      up.z * xh.x - up.x * xh.z,
                      up.x * xh.y - up.y * xh.x};
        const double mx = m.x * xh.x + m.y * xh.y + m.z * xh.z;
        const double my = m.x * yh.x + m.y * yh.y + m.z * yh.z;
        return normalize_heading(std::atan2(-my, mx));
    }

    std::vector<HeadingSample> samples_;
};

inline HeadingSample estimate_heading(const RawTrace& trace, TimestampMs t,
                                      const PedometryConfig& cfg) {
    return HeadingTrack(trace, cfg).at(t);
}

// Integrates steps into a motion trace. headings[i] applies to steps[i];
// each step lands at t_valley. No resets, floor 0 throughout.
inline MotionTrace dead_reckon(const std::vector<StepEvent>& steps,
                               const std::vector<double>& headings,
                               Position start, TimestampMs start_t = 0) {
    if (steps.size() != headings.size()) {
        throw ContractError("dead_reckon: steps and headings differ in length");
    }
    MotionTrace m;
    m.start = start;
    m.start_t = start_t;
    Position pos = start;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double th = normalize_heading(headings[i]);
        pos = pos + Vec2{steps[i].step_len * std::cos(th), steps[i].step_len * std::sin(th)};
        Step st;
        st.t = steps[i].t_valley;
        st.pos = pos;
        st.heading = th;
        st.step_len = steps[i].step_len;
        m.steps.push_back(std::move(st));
    }
    return m;
}

// Full uncorrected pedometry pass: detect steps, sample the heading track at
// each step peak, and dead-reckon from `start`.
inline MotionTrace run_pedometry(const RawTrace& trace, const PedometryConfig& cfg,
                                 Position start, TimestampMs start_t = 0) {
    const auto series = accel_magnitude_series(trace, cfg.smooth_window_ms);
    const auto steps = detect_steps(series, cfg);
    MotionTrace m;
    if (steps.empty()) {
        m.session_id = trace.session_id;
        m.start = start;
        m.start_t = start_t;
        return m;
    }
    HeadingTrack track(trace, cfg);
    std::vector<double> headings;
    headings.reserve(steps.size());
    for (const StepEvent& s : steps) headings.push_back(track.at(s.t_peak).theta);
    m = dead_reckon(steps, headings, start, start_t);
    m.session_id = trace.session_id;
    return m;
}

}  // namespace walkmap

#endif  // WALKMAP_PEDOMETRY_HPP
