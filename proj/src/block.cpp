#include "bbl/block.hpp"

#include "bbl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bbl {

namespace {

// Bumps must come in pairs mirrored about a/2 (a lone bump centered at a/2
// mirrors onto itself). Checked structurally, which makes kappa(s) = kappa(a-s)
// hold to roundoff rather than to a sampling tolerance.
void check_symmetry(const std::vector<Bump>& bumps, double a) {
    std::vector<Bump> sorted = bumps;
    std::sort(sorted.begin(), sorted.end(),
              [](const Bump& x, const Bump& y) { return x.center < y.center; });
    const double ctol = 1e-12 * a;
    std::size_t i = 0, j = sorted.size();
    while (i < j) {
        const Bump& lo = sorted[i];
        const Bump& hi = sorted[j - 1];
        if (i == j - 1) {
            if (std::abs(lo.center - a / 2) > ctol)
                throw Error("block bumps are not mirror-symmetric about the midpoint");
            break;
        }
        bool ok = std::abs(lo.center + hi.center - a) <= ctol &&
                  std::abs(lo.halfwidth - hi.halfwidth) <= ctol &&
                  std::abs(lo.amplitude - hi.amplitude) <=
                      1e-12 * std::max(1.0, std::abs(lo.amplitude));
        if (!ok) throw Error("block bumps are not mirror-symmetric about the midpoint");
        ++i;
        --j;
    }
}

} // namespace

BuildingBlock::BuildingBlock(double base, double length, std::vector<Bump> bumps)
    : base_(base) {
    if (!(base > 0.0)) throw Error("block base curvature must be positive");
    if (!(length > 0.0)) throw Error("block length must be positive");
    check_symmetry(bumps, length);
    CurvatureProfile prof = CurvatureProfile::single(base, length, std::move(bumps));
    min_kappa_ = prof.min_kappa();
    if (!(min_kappa_ > 0.0))
        throw ConvexityError("block curvature is not strictly positive", min_kappa_);
    double omega = prof.total_turning();
    if (!(omega > 0.0) || !(omega < M_PI))
        throw Error("block turning must lie strictly between 0 and pi");
    geom_ = std::make_shared<GeometryModel>(std::move(prof));
}

std::pair<CurvatureProfile, RigidMotion> glue(const BuildingBlock& b1, const BuildingBlock& b2) {
    return {b1.profile().concat(b2.profile()), b1.exit_motion()};
}

} // namespace bbl
