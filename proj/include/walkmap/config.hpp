// Pipeline configuration: one flat key = value file covering every tunable.
//
// Lines are `section.key = value` with `#` comments; values are numbers,
// booleans, or strings (quotes optional). Unknown keys are rejected so typos
// fail loudly. The effective config can be echoed as JSON, and every output
// document embeds that echo for provenance.

#ifndef WALKMAP_CONFIG_HPP
#define WALKMAP_CONFIG_HPP

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "walkmap/core.hpp"

namespace walkmap {

struct PedometryConfig {
    double g = 9.81;                    // m/s^2
    double smooth_window_ms = 150.0;    // accel magnitude moving average
    double peak_thresh = 1.5;           // m/s^2 above g for a step peak
    double valley_thresh = 1.5;         // m/s^2 below g for a step valley
    double max_step_interval_ms = 800.0;  // max peak-to-valley spacing
    double default_step_len = 0.7;      // meters per step
    double heading_fuse_coeff = 0.98;   // gyro weight in complementary filter
};

struct AnchorConfig {
    double window_ms = 2000.0;      // activity window length
    double window_overlap = 0.5;    // fraction of window shared by neighbors
    double t_var = 0.5;             // accel |a| variance gate, (m/s^2)^2
    double t_mag = 4.0;             // magnet |m| variance gate, uT^2
    double t_corr = 0.5;            // forward/vertical correlation gate
    double t_peak = 13.0;           // |a| peak separating stairs down from up
    double weight_delta = 0.4;      // m/s^2 sustained deviation = weight event
    double weight_min_ms = 500.0;   // minimum weight-event duration
    double stand_min_ms = 1000.0;   // quiet time required before a ride
    double cruise_min_ms = 1000.0;  // minimum cruise between weight events
    double per_floor_ms = 2500.0;   // cruise time per floor traveled
    double match_radius = 5.0;      // meters, anchor matching
    double wifi_match_min = 0.4;    // Jaccard gate when both signatures exist
};

struct CorrectionConfig {
    int refine_iterations = 1;  // re-estimate anchors from corrected traces
};

struct FloorplanConfig {
    double turn_thresh_deg = 45.0;   // heading change that splits a segment
    double pause_min_ms = 2000.0;    // inter-step gap that splits a segment
    double min_len = 1.5;            // meters, segment filter
    double min_dur_ms = 2000.0;      // segment filter
    double density_radius = 2.0;     // meters, neighbor-density feature
    double room_eps = 3.0;           // DBSCAN over segment centers
    int room_min_pts = 3;
    double wifi_lambda = 2.0;        // meters per unit (1 - Jaccard)
    double door_eps = 1.5;           // DBSCAN over room x corridor crossings
    int door_min_pts = 2;
    double alpha_radius = 0.0;       // 0 = auto (2 x median NN distance)
    int tree_max_depth = 4;
    std::string model_path;          // segment classifier; empty = fallback
    double fallback_corridor_len = 8.0;      // fallback: length gate
    double fallback_density_factor = 2.0;    // fallback: x map-median density
};

struct SimulatorConfig {
    int sample_rate_hz = 50;         // ACCEL/MAGNET/GYRO
    double wifi_period_s = 2.0;
    double gps_duty_cycle_s = 120.0;
    double speed_mps = 1.4;          // corridor walking speed
    double room_speed_mps = 1.0;     // slower gait inside rooms
    double dwell_min_s = 5.0;        // pause inside a visited room
    double dwell_max_s = 20.0;
    double approach_dist = 30.0;     // outdoor approach before the entrance
    int rooms = 12;
    std::string topology = "L";      // corridor layout: line | L | loop
    int floors = 1;
    double origin_lat = 30.0;
    double origin_lon = 31.0;
    // Noise model (all zero = closed-loop exact).
    double heading_sigma_deg = 3.0;        // per-step iid heading error
    double heading_drift_sigma_deg = 0.1;  // per-step random-walk increment
    double step_len_sigma = 0.05;          // meters
    double accel_noise_sigma = 0.15;       // m/s^2 per sample
    double magnet_noise_sigma = 0.3;       // uT per sample
    double gyro_noise_sigma = 0.0;         // rad/s per sample
    double gps_fix_sigma = 3.0;            // meters
    double rssi_sigma_db = 4.0;            // WiFi shadowing
    double path_loss_exponent = 3.0;
    double wifi_tx_dbm = -40.0;            // RSSI at 1 m
    double wifi_min_dbm = -60.0;           // receiver cutoff
    double wall_loss_db = 6.0;             // per wall crossed
};

struct Config {
    PedometryConfig pedometry;
    AnchorConfig anchors;
    CorrectionConfig correction;
    FloorplanConfig floorplan;
    SimulatorConfig simulator;
};

namespace detail {

using FieldRef = std::variant<double*, int*, bool*, std::string*>;

struct FieldEntry {
    const char* key;
    FieldRef ref;
};

inline std::vector<FieldEntry> config_fields(Config& c) {
    return {
        {"pedometry.g", &c.pedometry.g},
        {"pedometry.smooth_window_ms", &c.pedometry.smooth_window_ms},
        {"pedometry.peak_thresh", &c.pedometry.peak_thresh},
        {"pedometry.valley_thresh", &c.pedometry.valley_thresh},
        {"pedometry.max_step_interval_ms", &c.pedometry.max_step_interval_ms},
        {"pedometry.default_step_len", &c.pedometry.default_step_len},
        {"pedometry.heading_fuse_coeff", &c.pedometry.heading_fuse_coeff},
        {"anchors.window_ms", &c.anchors.window_ms},
        {"anchors.window_overlap", &c.anchors.window_overlap},
        {"anchors.t_var", &c.anchors.t_var},
        {"anchors.t_mag", &c.anchors.t_mag},
        {"anchors.t_corr", &c.anchors.t_corr},
        {"anchors.t_peak", &c.anchors.t_peak},
        {"anchors.weight_delta", &c.anchors.weight_delta},
        {"anchors.weight_min_ms", &c.anchors.weight_min_ms},
        {"anchors.stand_min_ms", &c.anchors.stand_min_ms},
        {"anchors.cruise_min_ms", &c.anchors.cruise_min_ms},
        {"anchors.per_floor_ms", &c.anchors.per_floor_ms},
        {"anchors.match_radius", &c.anchors.match_radius},
        {"anchors.wifi_match_min", &c.anchors.wifi_match_min},
        {"correction.refine_iterations", &c.correction.refine_iterations},
        {"floorplan.turn_thresh_deg", &c.floorplan.turn_thresh_deg},
        {"floorplan.pause_min_ms", &c.floorplan.pause_min_ms},
        {"floorplan.min_len", &c.floorplan.min_len},
        {"floorplan.min_dur_ms", &c.floorplan.min_dur_ms},
        {"floorplan.density_radius", &c.floorplan.density_radius},
        {"floorplan.room_eps", &c.floorplan.room_eps},
        {"floorplan.room_min_pts", &c.floorplan.room_min_pts},
        {"floorplan.wifi_lambda", &c.floorplan.wifi_lambda},
        {"floorplan.door_eps", &c.floorplan.door_eps},
        {"floorplan.door_min_pts", &c.floorplan.door_min_pts},
        {"floorplan.alpha_radius", &c.floorplan.alpha_radius},
        {"floorplan.tree_max_depth", &c.floorplan.tree_max_depth},
        {"floorplan.model_path", &c.floorplan.model_path},
        {"floorplan.fallback_corridor_len", &c.floorplan.fallback_corridor_len},
        {"floorplan.fallback_density_factor", &c.floorplan.fallback_density_factor},
        {"simulator.sample_rate_hz", &c.simulator.sample_rate_hz},
        {"simulator.wifi_period_s", &c.simulator.wifi_period_s},
        {"simulator.gps_duty_cycle_s", &c.simulator.gps_duty_cycle_s},
        {"simulator.speed_mps", &c.simulator.speed_mps},
        {"simulator.room_speed_mps", &c.simulator.room_speed_mps},
        {"simulator.dwell_min_s", &c.simulator.dwell_min_s},
        {"simulator.dwell_max_s", &c.simulator.dwell_max_s},
        {"simulator.approach_dist", &c.simulator.approach_dist},
        {"simulator.rooms", &c.simulator.rooms},
        {"simulator.topology", &c.simulator.topology},
        {"simulator.floors", &c.simulator.floors},
        {"simulator.origin_lat", &c.simulator.origin_lat},
        {"simulator.origin_lon", &c.simulator.origin_lon},
        {"simulator.heading_sigma_deg", &c.simulator.heading_sigma_deg},
        {"simulator.heading_drift_sigma_deg", &c.simulator.heading_drift_sigma_deg},
        {"simulator.step_len_sigma", &c.simulator.step_len_sigma},
        {"simulator.accel_noise_sigma", &c.simulator.accel_noise_sigma},
        {"simulator.magnet_noise_sigma", &c.simulator.magnet_noise_sigma},
        {"simulator.gyro_noise_sigma", &c.simulator.gyro_noise_sigma},
        {"simulator.gps_fix_sigma", &c.simulator.gps_fix_sigma},
        {"simulator.rssi_sigma_db", &c.simulator.rssi_sigma_db},
        {"simulator.path_loss_exponent", &c.simulator.path_loss_exponent},
        {"simulator.wifi_tx_dbm", &c.simulator.wifi_tx_dbm},
        {"simulator.wifi_min_dbm", &c.simulator.wifi_min_dbm},
        {"simulator.wall_loss_db", &c.simulator.wall_loss_db},
    };
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace detail

// Applies `key = value` lines from the stream onto `cfg`. Throws ParseError
// with the line number on malformed lines, unknown keys, or bad values.
inline void apply_config(Config& cfg, std::istream& in) {
    auto fields = detail::config_fields(cfg);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        const std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\''))) {
            val = val.substr(1, val.size() - 2);
        }

        const detail::FieldEntry* entry = nullptr;
        for (const auto& f : fields) {
            if (key == f.key) {
                entry = &f;
                break;
            }
        }
        if (!entry) throw ParseError("unknown config key '" + key + "'", line_no);

        try {
            std::visit(
                [&](auto* ref) {
                    using T = std::remove_pointer_t<decltype(ref)>;
                    if constexpr (std::is_same_v<T, double>) {
                        std::size_t used = 0;
                        *ref = std::stod(val, &used);
                        if (used != val.size()) throw std::invalid_argument(val);
                    } else if constexpr (std::is_same_v<T, int>) {
                        std::size_t used = 0;
                        *ref = std::stoi(val, &used);
                        if (used != val.size()) throw std::invalid_argument(val);
                    } else if constexpr (std::is_same_v<T, bool>) {
                        if (val == "true") *ref = true;
                        else if (val == "false") *ref = false;
                        else throw std::invalid_argument(val);
                    } else {
                        *ref = val;
                    }
                },
                entry->ref);
        } catch (const std::exception&) {
            throw ParseError("bad value for '" + key + "': " + val, line_no);
        }
    }
}

inline Config load_config(const std::string& path) {
    Config cfg;
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path, 0);
    apply_config(cfg, in);
    return cfg;
}

// JSON echo of the effective configuration, keyed exactly like the file.
inline nlohmann::ordered_json config_to_json(const Config& cfg) {
    nlohmann::ordered_json j;
    auto fields = detail::config_fields(const_cast<Config&>(cfg));
    for (const auto& f : fields) {
        std::visit([&](auto* ref) { j[f.key] = *ref; }, f.ref);
    }
    return j;
}

}  // namespace walkmap

#endif  // WALKMAP_CONFIG_HPP
