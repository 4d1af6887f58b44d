#pragma once

// Closed strictly convex tables assembled from building blocks.

#include "bbl/block.hpp"
#include "bbl/geometry.hpp"
#include "bbl/rigid.hpp"

#include <vector>

namespace bbl {

struct TableSample {
    Vec2 point;
    double theta;       // lifted tangent angle, increases by 2*pi per lap
    double kappa;
    double kappa_d1;
};

class BilliardTable {
  public:
    double length() const { return joints_.back(); }
    std::size_t block_count() const { return blocks_.size(); }
    const BuildingBlock& block(std::size_t k) const { return blocks_[k]; }
    const std::vector<double>& joints() const { return joints_; }
    const RigidMotion& placement(std::size_t k) const { return placements_[k]; }

    // Arclength is taken mod length; theta lifts continuously across laps.
    TableSample eval(double s) const;
    Vec2 point(double s) const { return eval(s).point; }
    double theta(double s) const;
    double kappa(double s) const;
    double kappa_d1(double s) const;

    friend BilliardTable close_table(std::vector<BuildingBlock> blocks);

  private:
    BilliardTable() = default;
    std::size_t block_at(double s_red) const;

    std::vector<BuildingBlock> blocks_;
    std::vector<double> joints_;           // size n+1, joints_[0] = 0
    std::vector<RigidMotion> placements_;  // block k local frame -> table frame
};

// Glues the blocks in order; throws ClosureError unless the turnings sum to
// 2*pi and the chained rigid motions return to the identity (tol 1e-10 each).
BilliardTable close_table(std::vector<BuildingBlock> blocks);

// Minimum over cyclic shifts and orientation flip of the sup-distance between
// the two curvature functions; 0 iff the tables are congruent.
double congruence_distance(const BilliardTable& t1, const BilliardTable& t2);

inline constexpr double kClosureTol = 1e-10;

} // namespace bbl
