#pragma once

// Orientation-preserving rigid motions of the plane: x -> R(angle) x + shift.

#include "bbl/vec2.hpp"

#include <cmath>

namespace bbl {

struct RigidMotion {
    double angle = 0.0;
    Vec2 shift{0.0, 0.0};

    Vec2 apply(const Vec2& v) const { return rotated(v, angle) + shift; }

    static RigidMotion identity() { return {}; }
};

// Composition: (a * b)(x) = a(b(x)).
inline RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
    return {a.angle + b.angle, a.shift + rotated(b.shift, a.angle)};
}

inline RigidMotion inverse(const RigidMotion& m) {
    return {-m.angle, rotated(-m.shift, -m.angle)};
}

} // namespace bbl
