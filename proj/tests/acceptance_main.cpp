// Acceptance checks: one line of output per criterion, exit code = number of
// failed criteria. Every tolerance is pinned here, next to its check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bbl/construction.hpp"
#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "bbl/invariants.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/serialize.hpp"
#include "bbl/table.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (detail.empty()) detail = what;
    }
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof(b), "%.3g", v);
    return b;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

// Criterion 1: circle oracle suite.
Criterion criterion_circle() {
    Criterion c;
    const double t_start = now_seconds();
    bbl::BilliardTable circle = bbl::close_table(bbl::init_circle_blocks(4));

    // Billiard map advance s -> s + 2 phi, exact to 1e-12.
    for (int i = 1; i <= 40; ++i) {
        const double phi = 0.02 + (kPi - 0.04) * i / 41.0;
        bbl::PhaseState nx = bbl::next_bounce(circle, {0.37 * i, phi});
        double adv = nx.s - 0.37 * i;
        while (adv < 0.0) adv += circle.length();
        while (adv >= circle.length()) adv -= circle.length();
        if (std::fabs(adv - 2.0 * phi) > 1e-12) {
            c.fail("advance law off by " + fmt(std::fabs(adv - 2.0 * phi)) + " at phi=" + fmt(phi));
            break;
        }
    }

    // L_n = 2 n sin(pi/n) to 1e-10 for n in {4..256}.
    double worst_ln = 0.0;
    for (int n = 4; n <= 256; ++n) {
        const double got = bbl::max_perimeter_ngon(circle, n).perimeter;
        worst_ln = std::max(worst_ln, std::fabs(got - 2.0 * n * std::sin(kPi / n)));
    }
    if (worst_ln > 1e-10) c.fail("L_n error " + fmt(worst_ln) + " above 1e-10");

    // Lazutkin chart x(s) = s / 2 pi to 1e-12.
    bbl::LazutkinChart chart = bbl::build_chart(circle);
    double worst_x = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double s = circle.length() * i / 64.0;
        worst_x = std::max(worst_x, std::fabs(chart.x_of_s(s) - s / (2.0 * kPi)));
    }
    if (worst_x > 1e-12) c.fail("chart error " + fmt(worst_x) + " above 1e-12");

    // mm_quadrature = (2 pi, -4 pi, pi/60) to 1e-12.
    bbl::MMInvariants mm = bbl::mm_quadrature(circle);
    if (std::fabs(mm.ell0 - 2.0 * kPi) > 1e-12 || std::fabs(mm.ell1 + 4.0 * kPi) > 1e-12 ||
        std::fabs(mm.ell2 - kPi / 60.0) > 1e-12)
        c.fail("mm quadrature off: (" + fmt(mm.ell0 - 2.0 * kPi) + ", " +
               fmt(mm.ell1 + 4.0 * kPi) + ", " + fmt(mm.ell2 - kPi / 60.0) + ")");

    const double elapsed = now_seconds() - t_start;
    if (elapsed > 10.0) c.fail("runtime " + fmt(elapsed) + "s above 10s");
    c.note("max L_n err " + fmt(worst_ln) + ", max chart err " + fmt(worst_x) + ", " +
           fmt(elapsed) + "s");
    return c;
}

// Criterion 2: default scheme yields a non-congruent pair with equal invariants.
Criterion criterion_counterexample(const bbl::SchemeResult& res,
                                   const bbl::ComparisonReport& rep, double scheme_seconds) {
    Criterion c;
    if (res.report.congruence_dist < 1e-7)
        c.fail("congruence distance " + fmt(res.report.congruence_dist) + " below 1e-7");

    const double r0 = rel_diff(rep.a.ell0, rep.b.ell0);
    const double r1 = rel_diff(rep.a.ell1_quad, rep.b.ell1_quad);
    const double r2 = rel_diff(rep.a.ell2_quad, rep.b.ell2_quad);
    if (r0 > 1e-12 || r1 > 1e-12 || r2 > 1e-12)
        c.fail("mm quadrature rel diffs (" + fmt(r0) + ", " + fmt(r1) + ", " + fmt(r2) +
               ") above 1e-12");

    const double rc1 = rel_diff(rep.a.fit_c[0], rep.b.fit_c[0]);
    const double rc2 = rel_diff(rep.a.fit_c[1], rep.b.fit_c[1]);
    if (rc1 > 1e-4 || rc2 > 1e-4)
        c.fail("fitted c1/c2 rel diffs (" + fmt(rc1) + ", " + fmt(rc2) + ") above 1e-4");

    if (scheme_seconds > 300.0) c.fail("runtime " + fmt(scheme_seconds) + "s above 300s");
    c.note("distance " + fmt(res.report.congruence_dist) + ", quad rel " +
           fmt(std::max({r0, r1, r2})) + ", fit rel " + fmt(std::max(rc1, rc2)) + ", " +
           fmt(scheme_seconds) + "s");
    return c;
}

// Criterion 3: matched orbits share period and perimeter; periods increase.
Criterion criterion_matched_orbits(const bbl::SchemeResult& res,
                                   std::vector<bbl::Orbit>& orbits_a_out) {
    Criterion c;
    const double t_start = now_seconds();
    int prev_period = 0;
    double worst_rel = 0.0;
    for (double theta : res.report.thetas) {
        try {
            bbl::Orbit oa = bbl::closed_orbit_from_match(res.table_a, theta);
            bbl::Orbit ob = bbl::closed_orbit_from_match(res.table_b, theta);
            if (oa.period != ob.period)
                c.fail("periods differ at theta=" + fmt(theta) + ": " +
                       std::to_string(oa.period) + " vs " + std::to_string(ob.period));
            const double rel = rel_diff(oa.perimeter, ob.perimeter);
            worst_rel = std::max(worst_rel, rel);
            if (rel > 1e-8)
                c.fail("perimeter rel diff " + fmt(rel) + " above 1e-8 at theta=" + fmt(theta));
            if (oa.period <= prev_period)
                c.fail("period " + std::to_string(oa.period) + " does not increase");
            prev_period = oa.period;
            orbits_a_out.push_back(oa);
        } catch (const bbl::Error& e) {
            c.fail(std::string("orbit failed at theta=") + fmt(theta) + ": " + e.what());
        }
    }
    const double elapsed = now_seconds() - t_start;
    if (elapsed > 60.0) c.fail("runtime " + fmt(elapsed) + "s above 60s");
    c.note("max perimeter rel diff " + fmt(worst_rel) + ", periods up to " +
           std::to_string(prev_period) + ", " + fmt(elapsed) + "s");
    return c;
}

// Criterion 4: glancing decay exponents.
Criterion criterion_glancing(const bbl::SchemeResult& res) {
    Criterion c;
    const double t_start = now_seconds();
    const std::vector<double> y0s{1.0 / 20.0, 1.0 / 32.0, 1.0 / 56.0, 1.0 / 100.0, 1.0 / 180.0};
    double worst_ey = -1e300, worst_ex = -1e300;
    for (const bbl::BilliardTable* t : {&res.table_a, &res.table_b}) {
        bbl::GlancingReport rep = bbl::verify_glancing_estimates(*t, y0s);
        worst_ey = std::max(worst_ey, rep.e_y);
        worst_ex = std::max(worst_ex, rep.e_x);
    }
    if (worst_ey > -2.7) c.fail("e_y " + fmt(worst_ey) + " above -2.7");
    if (worst_ex > -1.8) c.fail("e_x " + fmt(worst_ex) + " above -1.8");

    bbl::BilliardTable circle = bbl::close_table(bbl::init_circle_blocks(4));
    bbl::GlancingReport circ = bbl::verify_glancing_estimates(circle, y0s);
    double max_dy = 0.0;
    for (const bbl::GlancingRow& r : circ.rows) max_dy = std::max(max_dy, r.d_y);
    if (max_dy > 1e-13) c.fail("circle D_y " + fmt(max_dy) + " not identically zero");
    if (!(std::isinf(circ.e_y) && circ.e_y > 0.0))
        c.fail("circle e_y sentinel missing");

    const double elapsed = now_seconds() - t_start;
    if (elapsed > 60.0) c.fail("runtime " + fmt(elapsed) + "s above 60s");
    c.note("e_y " + fmt(worst_ey) + ", e_x " + fmt(worst_ex) + ", circle D_y " + fmt(max_dy) +
           ", " + fmt(elapsed) + "s");
    return c;
}

// Criterion 5: theta-scaled bounce counts recover block Lazutkin perimeters.
Criterion criterion_bounce_law(const bbl::SchemeResult& res) {
    Criterion c;
    const double y0 = 1e-3;
    const double theta = 2.0 * std::asin(y0 / 4.0);
    bbl::BuildingBlock circle_block = bbl::init_circle_blocks(4)[0];
    const double k_circle =
        static_cast<double>(bbl::shoot_wall(circle_block, theta).bounces.size());
    const double calibration =
        bbl::lazutkin_perimeter(circle_block) / (k_circle * theta);
    double worst = 0.0;
    for (const bbl::BuildingBlock& b : res.blocks) {
        const double k = static_cast<double>(bbl::shoot_wall(b, theta).bounces.size());
        const double estimate = calibration * k * theta;
        const double target = bbl::lazutkin_perimeter(b);
        worst = std::max(worst, std::fabs(estimate - target) / target);
    }
    if (worst > 0.02) c.fail("bounce-law relative error " + fmt(worst) + " above 2%");
    c.note("max rel err " + fmt(worst) + " at theta=" + fmt(theta));
    return c;
}

// Criterion 6: Birkhoff maxima dominate matched perimeters, gap shrinking 4x.
Criterion criterion_gap(const bbl::SchemeResult& res, const std::vector<bbl::Orbit>& orbits_a) {
    Criterion c;
    std::vector<double> gaps;
    for (const bbl::Orbit& matched : orbits_a) {
        bbl::Orbit best = bbl::max_perimeter_ngon(res.table_a, matched.period);
        const double gap = best.perimeter - matched.perimeter;
        if (gap < 0.0)
            c.fail("matched orbit beats the n-gon maximum at q=" + std::to_string(matched.period) +
                   " by " + fmt(-gap));
        gaps.push_back(gap);
    }
    std::string seq;
    for (std::size_t j = 0; j + 1 < gaps.size(); ++j) {
        if (gaps[j + 1] > gaps[j] / 4.0)
            c.fail("gap shrank only " + fmt(gaps[j] / std::max(gaps[j + 1], 1e-300)) +
                   "x after q=" + std::to_string(orbits_a[j].period));
    }
    for (double g : gaps) seq += (seq.empty() ? "" : ", ") + fmt(g);
    c.note("gaps " + seq);
    return c;
}

// Criterion 7: byte-identical artifacts across reruns of the same config.
Criterion criterion_determinism() {
    Criterion c;
    bbl::SchemeConfig cfg;  // defaults
    bbl::SchemeResult r1 = bbl::run_scheme(cfg);
    bbl::SchemeResult r2 = bbl::run_scheme(cfg);
    if (bbl::serialize_table(r1.table_a) != bbl::serialize_table(r2.table_a))
        c.fail("table A differs between runs");
    if (bbl::serialize_table(r1.table_b) != bbl::serialize_table(r2.table_b))
        c.fail("table B differs between runs");
    if (bbl::serialize_certificates(r1.certificates) !=
        bbl::serialize_certificates(r2.certificates))
        c.fail("certificates differ between runs");
    c.note("tables and certificates byte-identical");
    return c;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, Criterion>> results;

    results.emplace_back("1 circle oracle suite", criterion_circle());

    bbl::SchemeConfig cfg;  // pinned defaults: n=4, perm (1,3,2,4), M=3, eps=0.02
    const double t_scheme = now_seconds();
    bbl::SchemeResult res = bbl::run_scheme(cfg);
    bbl::ComparisonReport rep = bbl::compare_tables(res.table_a, res.table_b);
    const double scheme_seconds = now_seconds() - t_scheme;

    results.emplace_back("2 counterexample pair", criterion_counterexample(res, rep, scheme_seconds));

    std::vector<bbl::Orbit> orbits_a;
    results.emplace_back("3 matched orbit families", criterion_matched_orbits(res, orbits_a));
    results.emplace_back("4 glancing decay", criterion_glancing(res));
    results.emplace_back("5 bounce-count law", criterion_bounce_law(res));
    results.emplace_back("6 perimeter gap decay", criterion_gap(res, orbits_a));
    results.emplace_back("7 determinism", criterion_determinism());

    int failures = 0;
    for (const auto& [name, crit] : results) {
        std::printf("criterion %-28s %s  %s\n", name.c_str(), crit.pass ? "PASS" : "FAIL",
                    crit.detail.c_str());
        if (!crit.pass) ++failures;
    }
    return failures;
}
