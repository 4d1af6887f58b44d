#include "bbl/bump.hpp"

#include "bbl/numerics.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace bbl {

double bump_value(double u) {
    const double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    return std::exp(-1.0 / w);
}

double bump_d1(double u) {
    const double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    const double q = 1.0 / w;
    return -2.0 * u * q * q * std::exp(-q);
}

double bump_d2(double u) {
    const double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    const double q = 1.0 / w;
    // d/du [-2u q^2] = -2 q^2 - 8 u^2 q^3; plus the (b'/b)^2 term.
    const double f1 = -2.0 * q * q - 8.0 * u * u * q * q * q;
    const double f2 = 4.0 * u * u * q * q * q * q;
    return (f1 + f2) * std::exp(-q);
}

namespace {

// Knot table for the antiderivative on [-1,1], filled once with per-interval
// 16-point Gauss-Legendre (the integrand is smooth, so each interval is exact
// to machine precision).  Quintic Hermite interpolation between knots keeps
// the evaluation error below 1e-16.
struct BumpTable {
    static constexpr int kIntervals = 8192;
    double h;
    std::vector<double> val;   // B at knots
    std::vector<double> d1;    // b at knots
    std::vector<double> d2;    // b' at knots

    BumpTable() : h(2.0 / kIntervals), val(kIntervals + 1), d1(kIntervals + 1), d2(kIntervals + 1) {
        val[0] = 0.0;
        for (int i = 0; i <= kIntervals; ++i) {
            const double u = -1.0 + i * h;
            d1[i] = bump_value(u);
            d2[i] = bump_d1(u);
        }
        for (int i = 0; i < kIntervals; ++i) {
            const double a = -1.0 + i * h;
            const double c = a + 0.5 * h;
            double acc = 0.0;
            for (int j = 0; j < 8; ++j) {
                const double x = 0.5 * h * num::gl16_nodes[j];
                acc += num::gl16_weights[j] * (bump_value(c + x) + bump_value(c - x));
            }
            val[i + 1] = val[i] + 0.5 * h * acc;
        }
    }

    double eval(double u) const {
        if (u <= -1.0) return 0.0;
        if (u >= 1.0) return val[kIntervals];
        const double t = (u + 1.0) / h;
        int i = static_cast<int>(t);
        if (i >= kIntervals) i = kIntervals - 1;
        const double x = (t - i) * h;  // offset within [0,h]
        // Two-point quintic Hermite in the local coordinate x/h.
        const double s = x / h;
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        const double H0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        const double H1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        const double G0 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        const double G1 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        const double G2 = 0.5 * s3 - s4 + 0.5 * s5;
        return H0 * val[i] + H1 * h * d1[i] + H2 * h * h * d2[i] +
               G0 * val[i + 1] + G1 * h * d1[i + 1] + G2 * h * h * d2[i + 1];
    }
};

const BumpTable& table() {
    static const BumpTable t;
    return t;
}

} // namespace

double bump_antiderivative(double u) { return table().eval(u); }

double bump_total_integral() { return table().eval(1.0); }

} // namespace bbl
