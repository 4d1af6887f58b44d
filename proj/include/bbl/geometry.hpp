#pragma once

// Arc-length parametrized curve reconstruction from a curvature profile.
// theta(s) is closed form; gamma(s) integrates (cos theta, sin theta) by
// adaptive quadrature from precomputed checkpoints so single-point queries
// stay cheap and the accumulated error over the whole curve stays below tol.

#include "bbl/profile.hpp"
#include "bbl/vec2.hpp"

#include <vector>

namespace bbl {

struct GeometrySample {
    Vec2 point;
    double theta;       // tangent angle, theta(0) = 0
    double kappa;
    double kappa_d1;
};

class GeometryModel {
  public:
    explicit GeometryModel(CurvatureProfile profile, double tol = 1e-12);

    const CurvatureProfile& profile() const { return prof_; }
    double length() const { return prof_.length(); }

    double theta(double s) const { return prof_.turning(s); }
    Vec2 tangent(double s) const { return unit_dir(theta(s)); }
    Vec2 point(double s) const;
    GeometrySample eval(double s) const;

    Vec2 endpoint() const { return checkpoints_.back(); }

  private:
    Vec2 chord_integral(double a, double b, double tol) const;

    CurvatureProfile prof_;
    double seg_;
    double tol_;
    std::vector<double> knots_;      // smoothness breakpoints of the profile
    std::vector<Vec2> checkpoints_;  // gamma at k * seg_, k = 0..M (last one at length)
};

// One-off evaluation without building a model by hand.
GeometrySample eval_geometry(const CurvatureProfile& profile, double s);

} // namespace bbl
