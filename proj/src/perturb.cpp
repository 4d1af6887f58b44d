#include "bbl/perturb.hpp"

#include "bbl/errors.hpp"
#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace bbl {

namespace {

constexpr int kMaxNewtonIters = 50;
constexpr double kResidualTol = 5e-15;

struct WindowBumps {
    std::array<double, 4> centers;
    double halfwidth;
};

// Accumulated turning added by the window bumps up to s, per unit amplitude.
double cum_turning(const WindowBumps& w, int i, double s) {
    return bump_turning(Bump{w.centers[static_cast<std::size_t>(i)], w.halfwidth, 1.0}, s);
}

} // namespace

PerturbResult perturb_block(const BuildingBlock& block, double support_lo, double support_hi,
                            const PerturbShape& shape, double delta) {
    const double a = block.length();
    if (!(support_lo > 0.0) || !(support_hi < a / 2.0) || !(support_lo < support_hi))
        throw Error("perturbation support must lie strictly inside (0, a/2)");
    if (delta == 0.0)
        return PerturbResult{block, {0.0, 0.0, 0.0, 0.0}, 0.0};

    const double width = support_hi - support_lo;
    WindowBumps w;
    w.halfwidth = shape.rel_halfwidth * width;
    for (std::size_t i = 0; i < 4; ++i) {
        w.centers[i] = support_lo + shape.rel_centers[i] * width;
        if (w.centers[i] - w.halfwidth <= support_lo - 1e-15 ||
            w.centers[i] + w.halfwidth >= support_hi + 1e-15)
            throw Error("perturbation bump support leaves the window");
    }
    for (std::size_t i = 0; i + 1 < 4; ++i)
        if (w.centers[i + 1] - w.centers[i] <= 2.0 * w.halfwidth)
            throw Error("perturbation bumps overlap");

    const CurvatureProfile& prof = block.profile();
    std::array<double, 4> amp{shape.sigma[0] * delta, shape.sigma[1] * delta,
                              shape.sigma[2] * delta, shape.sigma[3] * delta};

    // Newton on (added turning over window, window endpoint displacement).
    // All integrands are smooth; one 8-component pass gives the displacement
    // and the three Jacobian columns.
    bool converged = false;
    for (int iter = 0; iter < kMaxNewtonIters; ++iter) {
        auto quad = num::integrate_n<8>(
            [&](double s, double* out) {
                double dth = 0.0;
                double cum[4];
                for (int i = 0; i < 4; ++i) {
                    cum[i] = cum_turning(w, i, s);
                    dth += amp[static_cast<std::size_t>(i)] * cum[i];
                }
                double th0 = prof.turning(s);
                double th1 = th0 + dth;
                out[0] = std::cos(th1) - std::cos(th0);
                out[1] = std::sin(th1) - std::sin(th0);
                double nx = -std::sin(th1), ny = std::cos(th1);
                for (int i = 0; i < 3; ++i) {
                    out[2 + 2 * i] = cum[i] * nx;
                    out[3 + 2 * i] = cum[i] * ny;
                }
            },
            support_lo, support_hi, 1e-16);

        const double i1 = bump_total_integral();
        double r0 = 0.0;
        for (double v : amp) r0 += v * w.halfwidth * i1;
        double ux = quad.value[0], uy = quad.value[1];
        if (std::abs(r0) <= kResidualTol && std::abs(ux) <= kResidualTol &&
            std::abs(uy) <= kResidualTol) {
            converged = true;
            break;
        }

        // Rows: turning, u_x, u_y; columns: dA_1..dA_3.
        std::vector<double> J = {w.halfwidth * i1, w.halfwidth * i1, w.halfwidth * i1,
                                 quad.value[2],    quad.value[4],    quad.value[6],
                                 quad.value[3],    quad.value[5],    quad.value[7]};
        std::vector<double> rhs = {-r0, -ux, -uy};
        if (!num::solve_dense(J, rhs, 3))
            throw ConstraintSolveError("perturbation Jacobian is singular");
        for (std::size_t i = 0; i < 3; ++i) amp[i] += rhs[i];
    }
    if (!converged)
        throw ConstraintSolveError("perturbation constraints did not converge in 50 iterations");

    std::vector<Bump> bumps = block.bumps();
    double c0 = 0.0;
    const double b0 = bump_value(0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        bumps.push_back(Bump{w.centers[i], w.halfwidth, amp[i]});
        bumps.push_back(Bump{a - w.centers[i], w.halfwidth, amp[i]});
        c0 = std::max(c0, std::abs(amp[i]) * b0);
    }
    BuildingBlock out(block.base(), a, std::move(bumps));
    if (out.min_kappa() <= kKappaFloorFraction * block.base())
        throw ConvexityError("perturbed block dropped below the convexity floor",
                             out.min_kappa());
    return PerturbResult{std::move(out), amp, c0};
}

} // namespace bbl
