#pragma once

#include <cmath>

namespace bbl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator/(double c) const { return {x / c, y / c}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
};

inline Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Vec2 normalized(Vec2 a) { double n = norm(a); return {a.x / n, a.y / n}; }
inline Vec2 rotated(Vec2 v, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

} // namespace bbl
