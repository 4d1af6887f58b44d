#pragma once

// The C-infinity compactly supported bump used by every curvature profile:
//   b(u) = exp(-1/(1-u^2)) on |u|<1, zero outside.
// Closed-form derivatives, plus a machine-precision antiderivative table so
// turning angles integrate in O(1) per bump.

#include <stdexcept>

namespace bbl {

struct Bump {
    double center = 0.0;
    double halfwidth = 0.0;
    double amplitude = 0.0;
};

double bump_value(double u);
double bump_d1(double u);
double bump_d2(double u);

// Antiderivative B(u) = integral of b over [-1, min(u,1)]; B(u<=-1) = 0.
double bump_antiderivative(double u);

// Integral of b over its whole support (B(1)).
double bump_total_integral();

// Contribution of one bump to kappa and its s-derivatives at arclength s.
inline double bump_kappa(const Bump& b, double s) {
    const double u = (s - b.center) / b.halfwidth;
    return b.amplitude * bump_value(u);
}
inline double bump_kappa_d1(const Bump& b, double s) {
    const double u = (s - b.center) / b.halfwidth;
    return b.amplitude * bump_d1(u) / b.halfwidth;
}
inline double bump_kappa_d2(const Bump& b, double s) {
    const double u = (s - b.center) / b.halfwidth;
    return b.amplitude * bump_d2(u) / (b.halfwidth * b.halfwidth);
}
// Integral of the bump's kappa contribution over [piece start, s].
inline double bump_turning(const Bump& b, double s) {
    const double u = (s - b.center) / b.halfwidth;
    return b.amplitude * b.halfwidth * bump_antiderivative(u);
}

} // namespace bbl
