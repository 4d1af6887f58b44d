#include "bbl/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "bbl/numerics.hpp"

namespace bbl {

namespace {

double rel_diff(double x, double y) {
    double scale = std::max(std::fabs(x), std::fabs(y));
    if (scale == 0.0) return 0.0;
    return std::fabs(x - y) / scale;
}

}  // namespace

MMInvariants mm_block_integrals(const BuildingBlock& block) {
    // Both integrands are smooth away from bump support edges and piece
    // boundaries; splitting there keeps the adaptive quadrature error control
    // honest.
    const CurvatureProfile& profile = block.profile();
    std::vector<double> knots = profile.knots();
    const double tol = 1e-12 / static_cast<double>(knots.size());
    MMInvariants out;
    out.ell0 = profile.length();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1] > knots[i])) continue;
        auto r = num::integrate_n<2>(
            [&](double s, double* out) {
                double k = profile.kappa(s);
                double kd = profile.kappa_d1(s);
                // rho = 1/kappa: rho^{2/3} = k^{-2/3};
                // 9 rho^{4/3} + 8 rho^{-8/3} rho'^2 = k^{-4/3} (9 + 8 k'^2).
                out[0] = std::pow(k, -2.0 / 3.0);
                out[1] = std::pow(k, -4.0 / 3.0) * (9.0 + 8.0 * kd * kd);
            },
            knots[i], knots[i + 1], tol);
        out.ell1 += r.value[0];
        out.ell2 += r.value[1];
    }
    out.ell1 *= -2.0;
    out.ell2 /= 1080.0;
    return out;
}

MMInvariants mm_quadrature(const BilliardTable& table) {
    MMInvariants total;
    for (std::size_t k = 0; k < table.block_count(); ++k) {
        MMInvariants b = mm_block_integrals(table.block(k));
        total.ell0 += b.ell0;
        total.ell1 += b.ell1;
        total.ell2 += b.ell2;
    }
    return total;
}

ExpansionFit fit_expansion(const std::vector<std::pair<int, double>>& samples, int K) {
    if (K < 1) throw Error("fit degree must be at least 1");
    const int m = K + 1;  // unknowns: ell0 and c_1..c_K
    if (static_cast<int>(samples.size()) < K + 3)
        throw Error("need at least K+3 samples to fit the expansion");
    std::set<int> distinct;
    int n_min = samples.front().first, n_max = samples.front().first;
    for (const auto& [n, ln] : samples) {
        if (n < 2) throw Error("expansion samples need n >= 2");
        if (!std::isfinite(ln)) throw Error("expansion sample perimeter is not finite");
        distinct.insert(n);
        n_min = std::min(n_min, n);
        n_max = std::max(n_max, n);
    }
    if (distinct.size() != samples.size()) throw Error("expansion samples must have distinct n");
    if (n_max < 2 * n_min) throw Error("expansion samples must span at least one octave in n");

    // Rows scaled by sqrt(weight) = n^2; columns equilibrated to unit max entry
    // so the condition estimate reflects the grid geometry, not raw scaling.
    const int rows = static_cast<int>(samples.size());
    std::vector<double> design(static_cast<std::size_t>(rows) * m);
    std::vector<double> rhs_w(rows);
    for (int i = 0; i < rows; ++i) {
        double n = static_cast<double>(samples[i].first);
        double w = n * n;
        double basis = 1.0;
        for (int j = 0; j < m; ++j) {
            design[static_cast<std::size_t>(i) * m + j] = w * basis;
            basis /= n * n;
        }
        rhs_w[i] = w * samples[i].second;
    }
    std::vector<double> col_scale(m, 0.0);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < rows; ++i)
            col_scale[j] = std::max(col_scale[j],
                                    std::fabs(design[static_cast<std::size_t>(i) * m + j]));
        if (col_scale[j] == 0.0) col_scale[j] = 1.0;
        for (int i = 0; i < rows; ++i) design[static_cast<std::size_t>(i) * m + j] /= col_scale[j];
    }

    std::vector<double> normal(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (int i = 0; i < rows; ++i) {
        const double* row = &design[static_cast<std::size_t>(i) * m];
        for (int j = 0; j < m; ++j) {
            rhs[j] += row[j] * rhs_w[i];
            for (int k = j; k < m; ++k) normal[static_cast<std::size_t>(j) * m + k] += row[j] * row[k];
        }
    }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < j; ++k)
            normal[static_cast<std::size_t>(j) * m + k] = normal[static_cast<std::size_t>(k) * m + j];

    double cond = num::condition_1norm(normal, m);
    if (!(cond < 1e12))
        throw IllConditioned("expansion fit normal system is ill-conditioned: n range too narrow",
                             cond);
    std::vector<double> sol = rhs;
    if (!num::solve_dense(normal, sol, m))
        throw IllConditioned("expansion fit normal system is singular", cond);

    ExpansionFit fit;
    fit.ell0_fit = sol[0] / col_scale[0];
    fit.c.resize(K);
    for (int j = 1; j < m; ++j) fit.c[j - 1] = sol[j] / col_scale[j];

    double ss = 0.0;
    for (const auto& [n, ln] : samples) {
        double nn = static_cast<double>(n);
        double pred = fit.ell0_fit;
        double basis = 1.0;
        for (int j = 1; j < m; ++j) {
            basis /= nn * nn;
            pred += fit.c[j - 1] * basis;
        }
        double r = ln - pred;
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / rows);
    return fit;
}

const std::vector<int>& default_n_grid() {
    static const std::vector<int> grid{16, 24, 32, 48, 64, 96, 128, 192, 256};
    return grid;
}

ComparisonReport compare_tables(const BilliardTable& a, const BilliardTable& b,
                                const std::vector<int>& n_grid, int fit_degree) {
    if (n_grid.empty()) throw Error("comparison n-grid is empty");
    ComparisonReport rep;
    rep.n_grid = n_grid;

    MMInvariants qa = mm_quadrature(a);
    MMInvariants qb = mm_quadrature(b);
    rep.a.ell0 = qa.ell0;
    rep.a.ell1_quad = qa.ell1;
    rep.a.ell2_quad = qa.ell2;
    rep.b.ell0 = qb.ell0;
    rep.b.ell1_quad = qb.ell1;
    rep.b.ell2_quad = qb.ell2;

    std::vector<std::pair<int, double>> samples_a, samples_b;
    samples_a.reserve(n_grid.size());
    samples_b.reserve(n_grid.size());
    for (int n : n_grid) {
        double la = max_perimeter_ngon(a, n).perimeter;
        double lb = max_perimeter_ngon(b, n).perimeter;
        samples_a.emplace_back(n, la);
        samples_b.emplace_back(n, lb);
        rep.perimeters_a.push_back(la);
        rep.perimeters_b.push_back(lb);
    }
    ExpansionFit fa = fit_expansion(samples_a, fit_degree);
    ExpansionFit fb = fit_expansion(samples_b, fit_degree);
    rep.a.ell0_fit = fa.ell0_fit;
    rep.a.fit_c = fa.c;
    rep.a.fit_residual = fa.residual;
    rep.b.ell0_fit = fb.ell0_fit;
    rep.b.fit_c = fb.c;
    rep.b.fit_residual = fb.residual;

    auto push_diff = [&](const std::string& name, double x, double y) {
        rep.a.counterpart_diffs.push_back({name, std::fabs(x - y), rel_diff(x, y)});
    };
    push_diff("ell0", qa.ell0, qb.ell0);
    push_diff("ell1_quad", qa.ell1, qb.ell1);
    push_diff("ell2_quad", qa.ell2, qb.ell2);
    push_diff("ell0_fit", fa.ell0_fit, fb.ell0_fit);
    for (std::size_t k = 0; k < fa.c.size(); ++k)
        push_diff("c_" + std::to_string(k + 1), fa.c[k], fb.c[k]);
    rep.b.counterpart_diffs = rep.a.counterpart_diffs;

    rep.congruence_dist = congruence_distance(a, b);
    return rep;
}

}  // namespace bbl
