#include "bbl/table.hpp"

#include "bbl/errors.hpp"
#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bbl {

BilliardTable close_table(std::vector<BuildingBlock> blocks) {
    if (blocks.empty()) throw Error("close_table needs at least one block");
    double total_turning = 0.0;
    RigidMotion chain = RigidMotion::identity();
    std::vector<RigidMotion> placements;
    placements.reserve(blocks.size());
    for (const BuildingBlock& b : blocks) {
        placements.push_back(chain);
        chain = compose(chain, b.exit_motion());
        total_turning += b.turning();
    }
    double turning_defect = std::abs(total_turning - 2.0 * M_PI);
    double endpoint_gap = chain.shift.norm();
    double angle_defect = std::abs(chain.angle - 2.0 * M_PI);
    if (turning_defect > kClosureTol || endpoint_gap > kClosureTol || angle_defect > kClosureTol)
        throw ClosureError("glued blocks do not close into a table",
                           turning_defect, std::max(endpoint_gap, angle_defect));

    BilliardTable t;
    t.blocks_ = std::move(blocks);
    t.placements_ = std::move(placements);
    t.joints_.reserve(t.blocks_.size() + 1);
    t.joints_.push_back(0.0);
    for (const BuildingBlock& b : t.blocks_) t.joints_.push_back(t.joints_.back() + b.length());
    return t;
}

std::size_t BilliardTable::block_at(double s_red) const {
    auto it = std::upper_bound(joints_.begin(), joints_.end(), s_red);
    std::size_t k = (it == joints_.begin()) ? 0 : static_cast<std::size_t>(it - joints_.begin()) - 1;
    if (k >= blocks_.size()) k = blocks_.size() - 1;
    return k;
}

TableSample BilliardTable::eval(double s) const {
    const double len = length();
    double laps = std::floor(s / len);
    double s_red = s - laps * len;
    if (s_red >= len) { s_red -= len; laps += 1.0; }
    std::size_t k = block_at(s_red);
    double u = s_red - joints_[k];
    GeometrySample g = blocks_[k].geometry().eval(u);
    const RigidMotion& m = placements_[k];
    return TableSample{m.apply(g.point), g.theta + m.angle + 2.0 * M_PI * laps,
                       g.kappa, g.kappa_d1};
}

double BilliardTable::theta(double s) const {
    const double len = length();
    double laps = std::floor(s / len);
    double s_red = s - laps * len;
    if (s_red >= len) { s_red -= len; laps += 1.0; }
    std::size_t k = block_at(s_red);
    return blocks_[k].profile().turning(s_red - joints_[k]) + placements_[k].angle +
           2.0 * M_PI * laps;
}

double BilliardTable::kappa(double s) const {
    double s_red = s - std::floor(s / length()) * length();
    if (s_red >= length()) s_red -= length();
    std::size_t k = block_at(s_red);
    return blocks_[k].profile().kappa(s_red - joints_[k]);
}

double BilliardTable::kappa_d1(double s) const {
    double s_red = s - std::floor(s / length()) * length();
    if (s_red >= length()) s_red -= length();
    std::size_t k = block_at(s_red);
    return blocks_[k].profile().kappa_d1(s_red - joints_[k]);
}

namespace {

// Sup-distance between kappa_1(.) and kappa_2(flip ? tau - . : tau + .) on an
// m-point grid.
double grid_sup_distance(const BilliardTable& t1, const BilliardTable& t2, double tau, bool flip,
                         int m) {
    const double len = t1.length();
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        double s = len * (static_cast<double>(i) / m);
        double s2 = flip ? tau - s : tau + s;
        worst = std::max(worst, std::abs(t1.kappa(s) - t2.kappa(s2)));
    }
    return worst;
}

} // namespace

double congruence_distance(const BilliardTable& t1, const BilliardTable& t2) {
    const double len1 = t1.length();
    const double len2 = t2.length();
    const double len_diff = std::abs(len1 - len2);

    const int kCoarse = 2048;
    const int kFine = 1 << 14;
    double best = std::numeric_limits<double>::infinity();
    double best_tau = 0.0;
    bool best_flip = false;
    for (int flip = 0; flip < 2; ++flip) {
        for (int j = 0; j < kCoarse; ++j) {
            double tau = len2 * (static_cast<double>(j) / kCoarse);
            double d = grid_sup_distance(t1, t2, tau, flip != 0, 256);
            if (d < best) { best = d; best_tau = tau; best_flip = flip != 0; }
        }
    }
    // Refine the shift around the coarse winner on the fine grid, then by
    // golden section on the continuous objective.
    double window = len2 / kCoarse;
    double refined = best;
    double refined_tau = best_tau;
    for (int j = -8; j <= 8; ++j) {
        double tau = best_tau + window * (static_cast<double>(j) / 8.0);
        double d = grid_sup_distance(t1, t2, tau, best_flip, kFine);
        if (d < refined) { refined = d; refined_tau = tau; }
    }
    auto objective = [&](double tau) { return grid_sup_distance(t1, t2, tau, best_flip, kFine); };
    double opt_tau = num::golden_min(objective, refined_tau - window / 8.0,
                                     refined_tau + window / 8.0, 1e-12 * len2);
    refined = std::min(refined, objective(opt_tau));
    return std::max(len_diff, refined);
}

} // namespace bbl
