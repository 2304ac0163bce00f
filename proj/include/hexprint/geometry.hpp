#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace hexprint {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr bool operator==(const Vec3&) const = default;
    constexpr Vec2 xy() const { return {x, y}; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

using Polyline = std::vector<Vec2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Closest point on segment [a, b] to p. Degenerate segments collapse to a.
inline Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= 0.0) {
        return a;
    }
    double t = (p - a).dot(ab) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return a + ab * t;
}

inline double distance_to_segment(Vec2 p, Vec2 a, Vec2 b)
{
    return (p - closest_point_on_segment(p, a, b)).norm();
}

/// Distance from p to the nearest point of a polyline (a single point counts as a polyline).
inline double distance_to_polyline(Vec2 p, const Polyline& line)
{
    if (line.empty()) {
        return INFINITY;
    }
    if (line.size() == 1) {
        return (p - line.front()).norm();
    }
    double best = INFINITY;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        best = std::min(best, distance_to_segment(p, line[i], line[i + 1]));
    }
    return best;
}

/// Length of the part of segment [a, b] lying inside the disk (center, radius).
inline double segment_length_in_disk(Vec2 a, Vec2 b, Vec2 center, double radius)
{
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len <= 0.0) {
        return 0.0;
    }
    // |a + t d - c|^2 = r^2, t in [0, 1]
    const Vec2 f = a - center;
    const double qa = d.dot(d);
    const double qb = 2.0 * f.dot(d);
    const double qc = f.dot(f) - radius * radius;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) {
        return 0.0;
    }
    const double sq = std::sqrt(disc);
    double t0 = (-qb - sq) / (2.0 * qa);
    double t1 = (-qb + sq) / (2.0 * qa);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    return t1 > t0 ? (t1 - t0) * len : 0.0;
}

}  // namespace hexprint
