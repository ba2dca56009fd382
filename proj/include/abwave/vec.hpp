#pragma once

#include <array>
#include <cmath>

namespace abwave {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Four-vector in (t, x, y, z) order; metric (+,-,-,-).
struct Vec4 {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec4 operator+(const Vec4& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    Vec4 operator-(const Vec4& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    Vec4 operator*(double s) const { return {t * s, x * s, y * s, z * s}; }
    double minkowski(const Vec4& o) const { return t * o.t - x * o.x - y * o.y - z * o.z; }
    double spatial_norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Axis-aligned rectangle.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

} // namespace abwave
