#include "bbl/lazutkin.hpp"

#include "bbl/errors.hpp"
#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bbl {

namespace {

constexpr int kChartKnots = 4096;

double kappa23(const BilliardTable& t, double s) { return std::pow(t.kappa(s), 2.0 / 3.0); }

} // namespace

LazutkinChart::LazutkinChart(const BilliardTable& table)
    : table_(std::make_shared<BilliardTable>(table)) {
    const double len = table.length();
    knot_h_ = len / kChartKnots;
    knot_f_.resize(kChartKnots + 1);
    knot_f_[0] = 0.0;
    const double seg_tol = 1e-12 / kChartKnots;
    for (int k = 0; k < kChartKnots; ++k) {
        auto r = num::integrate([&](double s) { return kappa23(*table_, s); }, k * knot_h_,
                                (k + 1) * knot_h_, seg_tol);
        knot_f_[static_cast<std::size_t>(k) + 1] = knot_f_[static_cast<std::size_t>(k)] + r.value;
    }
    c_ = 1.0 / knot_f_.back();
}

double LazutkinChart::x_of_s(double s) const {
    const double len = table_->length();
    double laps = std::floor(s / len);
    double s_red = s - laps * len;
    if (s_red >= len) { s_red -= len; laps += 1.0; }
    int k = std::min(static_cast<int>(s_red / knot_h_), kChartKnots - 1);
    double base = knot_f_[static_cast<std::size_t>(k)];
    if (s_red > k * knot_h_) {
        auto r = num::integrate([&](double t) { return kappa23(*table_, t); }, k * knot_h_, s_red,
                                1e-14);
        base += r.value;
    }
    return c_ * base + laps;
}

double LazutkinChart::s_of_x(double x) const {
    const double len = table_->length();
    double laps = std::floor(x);
    double x_red = x - laps;
    double target = x_red / c_;
    auto it = std::upper_bound(knot_f_.begin(), knot_f_.end(), target);
    int k = std::max(0, static_cast<int>(it - knot_f_.begin()) - 1);
    k = std::min(k, kChartKnots - 1);
    // Linear seed in the knot cell, then Newton on x_of_s.
    double f0 = knot_f_[static_cast<std::size_t>(k)];
    double f1 = knot_f_[static_cast<std::size_t>(k) + 1];
    double s = (k + (target - f0) / std::max(f1 - f0, 1e-300)) * knot_h_;
    s = std::clamp(s, 0.0, len);
    for (int i = 0; i < 6; ++i) {
        double err = x_of_s(s) - x_red;
        if (std::abs(err) < 1e-14) break;
        double deriv = c_ * kappa23(*table_, s);
        double step = err / deriv;
        s = std::clamp(s - step, 0.0, len);
        if (std::abs(step) < 1e-15 * std::max(1.0, len)) break;
    }
    return s + laps * len;
}

double LazutkinChart::y_of(double s, double phi) const {
    return 4.0 * c_ * std::pow(table_->kappa(s), -1.0 / 3.0) * std::sin(phi / 2.0);
}

LazutkinChart build_chart(const BilliardTable& table) { return LazutkinChart(table); }

LazutkinState to_lazutkin(const LazutkinChart& chart, const PhaseState& state) {
    return LazutkinState{chart.x_of_s(state.s), chart.y_of(state.s, state.phi)};
}

PhaseState from_lazutkin(const LazutkinChart& chart, const LazutkinState& state) {
    double s = chart.s_of_x(state.x);
    double arg = state.y / (4.0 * chart.c_omega()) *
                 std::pow(chart.table().kappa(s), 1.0 / 3.0);
    if (!(arg > -1.0) || !(arg < 1.0))
        throw Error("Lazutkin y outside the representable angle range");
    return PhaseState{s, 2.0 * std::asin(arg)};
}

double lazutkin_perimeter(const CurvatureProfile& profile) {
    // Piece boundaries and bump support edges are the only places where the
    // integrand loses smoothness; split there and integrate adaptively.
    std::vector<double> knots = profile.knots();
    double total = 0.0;
    const double tol = 1e-12 / static_cast<double>(knots.size());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1] > knots[i])) continue;
        auto r = num::integrate(
            [&](double s) { return std::pow(profile.kappa(s), 2.0 / 3.0); }, knots[i],
            knots[i + 1], tol);
        total += r.value;
    }
    return total;
}

double lazutkin_perimeter(const BuildingBlock& block) {
    return lazutkin_perimeter(block.profile());
}

GlancingReport verify_glancing_estimates(const BilliardTable& table,
                                         const std::vector<double>& y0_list) {
    LazutkinChart chart(table);
    GlancingReport report;
    for (double y0 : y0_list) {
        if (!(y0 > 1e-6) || !(y0 <= 0.05))
            throw Error("glancing y0 must lie in (1e-6, 0.05]");
        int n = static_cast<int>(std::ceil(1.0 / y0));
        PhaseState st = from_lazutkin(chart, LazutkinState{0.0, y0});
        double x0 = chart.x_of_s(st.s);
        double dy = 0.0, dx = 0.0;
        PhaseState cur = st;
        for (int k = 1; k <= n; ++k) {
            cur = next_bounce(table, cur);
            double xk = chart.x_of_s(cur.s);  // cur.s is lifted, so xk is too
            double yk = chart.y_of(cur.s, cur.phi);
            dy = std::max(dy, std::abs(yk - y0));
            dx = std::max(dx, std::abs(xk - x0 - k * y0));
        }
        report.rows.push_back(GlancingRow{y0, n, dy, dx});
    }
    // Least-squares slope of log d vs log n.
    auto slope = [&](auto pick, double flat_floor) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int m = 0;
        bool all_flat = true;
        for (const GlancingRow& r : report.rows) {
            double d = pick(r);
            if (d > flat_floor) all_flat = false;
        }
        if (all_flat) return std::numeric_limits<double>::infinity();
        for (const GlancingRow& r : report.rows) {
            double d = std::max(pick(r), 1e-300);
            double lx = std::log(static_cast<double>(r.n));
            double ly = std::log(d);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++m;
        }
        double denom = m * sxx - sx * sx;
        if (denom == 0.0) return std::numeric_limits<double>::infinity();
        return (m * sxy - sx * sy) / denom;
    };
    report.e_y = slope([](const GlancingRow& r) { return r.d_y; }, 1e-13);
    report.e_x = slope([](const GlancingRow& r) { return r.d_x; }, 1e-13);
    return report;
}

} // namespace bbl
