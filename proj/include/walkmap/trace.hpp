// Trace data model and file formats.
//
// A raw trace is one walking session: a JSON Lines file whose first line is a
// header record {"session":str,"device":str,"format":1} followed by
// time-ordered sensor records:
//   ACCEL/MAGNET/GYRO: {"t":int,"kind":str,"v":[f,f,f]}
//   GPS:               {"t":int,"kind":"GPS","lat":f,"lon":f,"fix":bool}
//   WIFI:              {"t":int,"kind":"WIFI","aps":[["ap_id",rssi_int],...]}
// Field order is irrelevant on input; the writer emits the exact layout above
// so that write(parse(x)) is byte-identical for files it produced.
//
// A motion trace is the dead-reckoned counterpart: step positions with
// per-step metadata plus reset events, also as JSON Lines (schema below).

#ifndef WALKMAP_TRACE_HPP
#define WALKMAP_TRACE_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkmap/core.hpp"

namespace walkmap {

using json = nlohmann::ordered_json;

enum class SensorKind { ACCEL, MAGNET, GYRO, GPS, WIFI };

inline const char* to_string(SensorKind k) {
    switch (k) {
        case SensorKind::ACCEL: return "ACCEL";
        case SensorKind::MAGNET: return "MAGNET";
        case SensorKind::GYRO: return "GYRO";
        case SensorKind::GPS: return "GPS";
        case SensorKind::WIFI: return "WIFI";
    }
    return "?";
}

struct WifiAp {
    std::string ap_id;
    int rssi = 0;  // dBm
    bool operator==(const WifiAp&) const = default;
};

struct GpsReading {
    double lat = 0.0;
    double lon = 0.0;
    bool fix = false;
    bool operator==(const GpsReading&) const = default;
};

// One timestamped sensor record; only the payload matching `kind` is set.
struct SensorSample {
    TimestampMs t = 0;
    SensorKind kind = SensorKind::ACCEL;
    Vec3 v{};                  // ACCEL m/s^2, MAGNET uT, GYRO rad/s
    GpsReading gps{};          // GPS only
    std::vector<WifiAp> aps;   // WIFI only
    bool operator==(const SensorSample&) const = default;
};

struct RawTrace {
    std::string session_id;
    std::string device_id;
    std::vector<SensorSample> samples;  // nondecreasing in t
    bool operator==(const RawTrace&) const = default;
};

struct ParseResult {
    RawTrace trace;
    int skipped_unknown = 0;  // records with an unrecognized kind
};

// Equirectangular projection about a fixed origin; adequate at building scale.
class LocalProjection {
public:
    LocalProjection() = default;
    LocalProjection(double origin_lat_deg, double origin_lon_deg)
        : lat0_(origin_lat_deg), lon0_(origin_lon_deg),
          cos_lat0_(std::cos(deg_to_rad(origin_lat_deg))) {}

    Position to_local(double lat_deg, double lon_deg) const {
        return {kEarthRadius * deg_to_rad(lon_deg - lon0_) * cos_lat0_,
                kEarthRadius * deg_to_rad(lat_deg - lat0_)};
    }

    // Inverse of to_local.
    std::pair<double, double> to_geo(const Position& p) const {
        return {lat0_ + rad_to_deg(p.y / kEarthRadius),
                lon0_ + rad_to_deg(p.x / (kEarthRadius * cos_lat0_))};
    }

    double origin_lat() const { return lat0_; }
    double origin_lon() const { return lon0_; }

    static constexpr double kEarthRadius = 6371000.0;  // meters

private:
    double lat0_ = 0.0;
    double lon0_ = 0.0;
    double cos_lat0_ = 1.0;
};

namespace detail {

inline json parse_json_line(const std::string& line, int line_no) {
    try {
        return json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
}

template <typename T>
T require_field(const json& j, const char* key, int line_no) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("missing field '") + key + "'", line_no);
    }
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("bad type for field '") + key + "'", line_no);
    }
}

}  // namespace detail

// Parses a raw trace stream. Unknown `kind` values are skipped and counted;
// structural problems (bad JSON, missing fields, non-monotonic time, missing
// header, empty trace) raise ParseError with the offending line number.
inline ParseResult parse_trace(std::istream& in) {
    ParseResult res;
    std::string line;
    int line_no = 0;
    bool have_header = false;

    // Header record.
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json h = detail::parse_json_line(line, line_no);
        if (!h.contains("session") || !h.contains("format")) {
            throw ParseError("first record must be the session header", line_no);
        }
        if (detail::require_field<int>(h, "format", line_no) != 1) {
            throw ParseError("unsupported trace format version", line_no);
        }
        res.trace.session_id = detail::require_field<std::string>(h, "session", line_no);
        res.trace.device_id = h.contains("device") ? detail::require_field<std::string>(h, "device", line_no) : "";
        have_header = true;
        break;
    }
    if (!have_header) {
        throw ParseError("empty trace stream", 0);
    }

    TimestampMs last_t = std::numeric_limits<TimestampMs>::min();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = detail::parse_json_line(line, line_no);
        const auto t = detail::require_field<TimestampMs>(j, "t", line_no);
        if (t < 0) throw ParseError("negative timestamp", line_no);
        if (t < last_t) throw ParseError("non-monotonic time", line_no);
        const auto kind = detail::require_field<std::string>(j, "kind", line_no);

        SensorSample s;
        s.t = t;
        if (kind == "ACCEL" || kind == "MAGNET" || kind == "GYRO") {
            s.kind = kind == "ACCEL" ? SensorKind::ACCEL
                     : kind == "MAGNET" ? SensorKind::MAGNET
                                        : SensorKind::GYRO;
            const auto v = detail::require_field<std::vector<double>>(j, "v", line_no);
            if (v.size() != 3) throw ParseError("'v' must have 3 components", line_no);
            s.v = {v[0], v[1], v[2]};
        } else if (kind == "GPS") {
            s.kind = SensorKind::GPS;
            s.gps.lat = detail::require_field<double>(j, "lat", line_no);
            s.gps.lon = detail::require_field<double>(j, "lon", line_no);
            s.gps.fix = detail::require_field<bool>(j, "fix", line_no);
        } else if (kind == "WIFI") {
            s.kind = SensorKind::WIFI;
            const json& aps = j.contains("aps") ? j.at("aps") : json::array();
            if (!aps.is_array()) throw ParseError("'aps' must be an array", line_no);
            for (const json& ap : aps) {
                if (!ap.is_array() || ap.size() != 2 || !ap[0].is_string() ||
                    !ap[1].is_number_integer()) {
                    throw ParseError("WIFI ap entries must be [\"id\", rssi]", line_no);
                }
                s.aps.push_back({ap[0].get<std::string>(), ap[1].get<int>()});
            }
        } else {
            ++res.skipped_unknown;
            continue;
        }
        last_t = t;
        res.trace.samples.push_back(std::move(s));
    }
    if (res.trace.samples.empty()) {
        throw ParseError("trace contains no samples", line_no);
    }
    return res;
}

inline ParseResult parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file: " + path, 0);
    return parse_trace(in);
}

// Writes a raw trace in the canonical layout. Returns bytes written.
inline std::size_t write_trace(const RawTrace& trace, std::ostream& out) {
    if (trace.samples.empty()) {
        throw ContractError("refusing to write an empty trace");
    }
    std::size_t bytes = 0;
    auto emit = [&](const json& j) {
        const std::string s = j.dump();
        out << s << '\n';
        bytes += s.size() + 1;
    };
    emit(json{{"session", trace.session_id},
              {"device", trace.device_id},
              {"format", 1}});
    for (const SensorSample& s : trace.samples) {
        switch (s.kind) {
            case SensorKind::ACCEL:
            case SensorKind::MAGNET:
            case SensorKind::GYRO:
                emit(json{{"t", s.t},
                          {"kind", to_string(s.kind)},
                          {"v", {s.v.x, s.v.y, s.v.z}}});
                break;
            case SensorKind::GPS:
                emit(json{{"t", s.t},
                          {"kind", "GPS"},
                          {"lat", s.gps.lat},
                          {"lon", s.gps.lon},
                          {"fix", s.gps.fix}});
                break;
            case SensorKind::WIFI: {
                json aps = json::array();
                for (const WifiAp& ap : s.aps) {
                    aps.push_back(json::array({ap.ap_id, ap.rssi}));
                }
                emit(json{{"t", s.t}, {"kind", "WIFI"}, {"aps", std::move(aps)}});
                break;
            }
        }
    }
    if (!out) throw ContractError("trace write failed (I/O error)");
    return bytes;
}

inline void write_trace_file(const RawTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open for write: " + path);
    write_trace(trace, out);
}

// ---------------------------------------------------------------------------
// Motion traces (dead-reckoned output).

struct Step {
    TimestampMs t = 0;
    Position pos{};
    double heading = 0.0;   // radians, [-pi, pi)
    double step_len = 0.0;  // meters
    int floor = 0;
    bool indoor = true;
    std::optional<std::vector<WifiAp>> wifi_snapshot;
    bool operator==(const Step&) const = default;
};

struct ResetEvent {
    TimestampMs t = 0;
    std::string anchor_id;
    Position pre{};
    Position post{};
    bool operator==(const ResetEvent&) const = default;
};

struct MotionTrace {
    std::string session_id;
    Position start{};
    TimestampMs start_t = 0;
    int start_floor = 0;
    bool unseeded = false;  // no GPS / entrance seed; anchored at local origin
    std::vector<Step> steps;
    std::vector<ResetEvent> resets;
    int floor = 0;  // floor after the last step
    bool operator==(const MotionTrace&) const = default;

    double path_length() const {
        double s = 0.0;
        for (const Step& st : steps) s += st.step_len;
        return s;
    }

    Position end_pos() const { return steps.empty() ? start : steps.back().pos; }
};

// Motion trace JSONL schema:
//   header {"session":str,"format":1,"type":"motion","start":[x,y],
//           "t0":int,"floor0":int,"floor":int,"unseeded":bool}
//   step   {"t":int,"kind":"STEP","pos":[x,y],"heading":f,"len":f,
//           "floor":int,"indoor":bool[,"wifi":[["id",rssi],...]]}
//   reset  {"t":int,"kind":"RESET","anchor":str,"pre":[x,y],"post":[x,y]}
// Steps and resets are interleaved in time order (resets before steps at
// equal t, preserving emission order).
inline std::size_t write_motion_trace(const MotionTrace& m, std::ostream& out) {
    std::size_t bytes = 0;
    auto emit = [&](const json& j) {
        const std::string s = j.dump();
        out << s << '\n';
        bytes += s.size() + 1;
    };
    emit(json{{"session", m.session_id},
              {"format", 1},
              {"type", "motion"},
              {"start", {m.start.x, m.start.y}},
              {"t0", m.start_t},
              {"floor0", m.start_floor},
              {"floor", m.floor},
              {"unseeded", m.unseeded}});
    std::size_t si = 0, ri = 0;
    while (si < m.steps.size() || ri < m.resets.size()) {
        const bool take_reset =
            ri < m.resets.size() &&
            (si >= m.steps.size() || m.resets[ri].t <= m.steps[si].t);
        if (take_reset) {
            const ResetEvent& r = m.resets[ri++];
            emit(json{{"t", r.t},
                      {"kind", "RESET"},
                      {"anchor", r.anchor_id},
                      {"pre", {r.pre.x, r.pre.y}},
                      {"post", {r.post.x, r.post.y}}});
        } else {
            const Step& s = m.steps[si++];
            json j{{"t", s.t},
                   {"kind", "STEP"},
                   {"pos", {s.pos.x, s.pos.y}},
                   {"heading", s.heading},
                   {"len", s.step_len},
                   {"floor", s.floor},
                   {"indoor", s.indoor}};
            if (s.wifi_snapshot) {
                json aps = json::array();
                for (const WifiAp& ap : *s.wifi_snapshot) {
                    aps.push_back(json::array({ap.ap_id, ap.rssi}));
                }
                j["wifi"] = std::move(aps);
            }
            emit(j);
        }
    }
    if (!out) throw ContractError("motion trace write failed (I/O error)");
    return bytes;
}

inline MotionTrace parse_motion_trace(std::istream& in) {
    MotionTrace m;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = detail::parse_json_line(line, line_no);
        if (!have_header) {
            if (!j.contains("type") || j.at("type") != "motion") {
                throw ParseError("expected motion trace header", line_no);
            }
            if (detail::require_field<int>(j, "format", line_no) != 1) {
                throw ParseError("unsupported motion trace format version", line_no);
            }
            m.session_id = detail::require_field<std::string>(j, "session", line_no);
            const auto st = detail::require_field<std::vector<double>>(j, "start", line_no);
            if (st.size() != 2) throw ParseError("'start' must have 2 components", line_no);
            m.start = {st[0], st[1]};
            m.start_t = detail::require_field<TimestampMs>(j, "t0", line_no);
            m.start_floor = detail::require_field<int>(j, "floor0", line_no);
            m.floor = detail::require_field<int>(j, "floor", line_no);
            m.unseeded = detail::require_field<bool>(j, "unseeded", line_no);
            have_header = true;
            continue;
        }
        const auto kind = detail::require_field<std::string>(j, "kind", line_no);
        if (kind == "STEP") {
            Step s;
            s.t = detail::require_field<TimestampMs>(j, "t", line_no);
            const auto p = detail::require_field<std::vector<double>>(j, "pos", line_no);
            if (p.size() != 2) throw ParseError("'pos' must have 2 components", line_no);
            s.pos = {p[0], p[1]};
            s.heading = detail::require_field<double>(j, "heading", line_no);
            s.step_len = detail::require_field<double>(j, "len", line_no);
            s.floor = detail::require_field<int>(j, "floor", line_no);
            s.indoor = detail::require_field<bool>(j, "indoor", line_no);
            if (j.contains("wifi")) {
                std::vector<WifiAp> aps;
                for (const json& ap : j.at("wifi")) {
                    aps.push_back({ap.at(0).get<std::string>(), ap.at(1).get<int>()});
                }
                s.wifi_snapshot = std::move(aps);
            }
            m.steps.push_back(std::move(s));
        } else if (kind == "RESET") {
            ResetEvent r;
            r.t = detail::require_field<TimestampMs>(j, "t", line_no);
            r.anchor_id = detail::require_field<std::string>(j, "anchor", line_no);
            const auto pre = detail::require_field<std::vector<double>>(j, "pre", line_no);
            const auto post = detail::require_field<std::vector<double>>(j, "post", line_no);
            if (pre.size() != 2 || post.size() != 2) {
                throw ParseError("'pre'/'post' must have 2 components", line_no);
            }
            r.pre = {pre[0], pre[1]};
            r.post = {post[0], post[1]};
            m.resets.push_back(std::move(r));
        } else {
            throw ParseError("unknown motion record kind '" + kind + "'", line_no);
        }
    }
    if (!have_header) throw ParseError("empty motion trace stream", 0);
    return m;
}

inline void write_motion_trace_file(const MotionTrace& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open for write: " + path);
    write_motion_trace(m, out);
}

inline MotionTrace parse_motion_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open motion trace file: " + path, 0);
    return parse_motion_trace(in);
}

}  // namespace walkmap

#endif  // WALKMAP_TRACE_HPP
