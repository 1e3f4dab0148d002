// Core math types and conventions shared by every module.
//
// Coordinate frame: local planar meters, x east, y north, origin fixed per
// building. Headings are radians, counterclockwise from the +x axis,
// normalized to [-pi, pi).

#ifndef WALKMAP_CORE_HPP
#define WALKMAP_CORE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkmap {

using TimestampMs = std::int64_t;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3-D cross product; >0 when o is CCW from *this.
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

using Position = Vec2;

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into [-pi, pi). Idempotent and 2*pi periodic; pi maps to -pi.
inline double normalize_heading(double theta_raw) {
    double t = std::fmod(theta_raw + kPi, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t - kPi;
}

// Smallest signed rotation taking `from` onto `to`, in [-pi, pi).
inline double heading_diff(double to, double from) {
    return normalize_heading(to - from);
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Thrown when an input stream or document violates the file format.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Thrown when a caller violates an operation precondition.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Thrown by geometry kernels on inputs with no defined result
// (fewer than three points, all collinear, ...).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace walkmap

#endif  // WALKMAP_CORE_HPP
