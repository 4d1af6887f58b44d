#pragma once

// Building blocks: symmetric, strictly convex, non-closed arcs stored as
// single-piece curvature profiles. A block is pinned in its local frame
// (start at the origin, start tangent along +x).

#include "bbl/geometry.hpp"
#include "bbl/profile.hpp"
#include "bbl/rigid.hpp"

#include <memory>
#include <vector>

namespace bbl {

class BuildingBlock {
  public:
    // Validates symmetry, convexity and turning range; throws on violation.
    BuildingBlock(double base, double length, std::vector<Bump> bumps = {});

    double length() const { return geom_->length(); }
    double base() const { return base_; }
    double turning() const { return geom_->profile().total_turning(); }
    Vec2 endpoint() const { return geom_->endpoint(); }
    double chord() const { return endpoint().norm(); }

    const CurvatureProfile& profile() const { return geom_->profile(); }
    const GeometryModel& geometry() const { return *geom_; }
    const std::vector<Bump>& bumps() const { return geom_->profile().piece(0).bumps; }

    double kappa(double s) const { return geom_->profile().kappa(s); }
    double min_kappa() const { return min_kappa_; }

    // Rigid motion carrying the local frame of a block glued after this one:
    // rotation by the turning angle, translation to the endpoint.
    RigidMotion exit_motion() const { return RigidMotion{turning(), endpoint()}; }

  private:
    double base_;
    double min_kappa_;
    std::shared_ptr<const GeometryModel> geom_;  // blocks are copied freely; geometry is immutable
};

// Gluing: concatenated profile plus the rigid motion placing b2 after b1.
std::pair<CurvatureProfile, RigidMotion> glue(const BuildingBlock& b1, const BuildingBlock& b2);

// Convexity floor for perturbed blocks, as a fraction of the base curvature.
inline constexpr double kKappaFloorFraction = 0.2;

} // namespace bbl
