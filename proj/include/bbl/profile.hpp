#pragma once

// Curvature profiles: kappa(s) = piecewise base + sum of compact bumps.
// The profile is the single source of truth for all geometry; kappa and its
// first two derivatives evaluate in closed form, turning angles via the bump
// antiderivative.

#include "bbl/bump.hpp"

#include <cstddef>
#include <vector>

namespace bbl {

struct ProfilePiece {
    double base = 1.0;
    double length = 0.0;
    std::vector<Bump> bumps;  // supports strictly inside (0, length), local coordinates
};

class CurvatureProfile {
  public:
    explicit CurvatureProfile(std::vector<ProfilePiece> pieces);
    static CurvatureProfile single(double base, double length, std::vector<Bump> bumps = {});

    double length() const { return offsets_.back(); }
    std::size_t piece_count() const { return pieces_.size(); }
    const ProfilePiece& piece(std::size_t i) const { return pieces_[i]; }
    double piece_offset(std::size_t i) const { return offsets_[i]; }

    double kappa(double s) const;
    double kappa_d1(double s) const;
    double kappa_d2(double s) const;

    // Integral of kappa over [0, s] (tangent angle relative to the start).
    double turning(double s) const;
    double total_turning() const { return turn_at_.back(); }

    // Concatenation: this followed by other, on [0, len+len'].
    CurvatureProfile concat(const CurvatureProfile& other) const;

    // Sorted breakpoints of smoothness: 0, piece boundaries, bump support
    // edges, length. Quadratures split here so every panel is smooth.
    std::vector<double> knots() const;

    // Global curvature minimum (dense scan plus golden-section refinement).
    double min_kappa() const;

  private:
    std::size_t piece_index(double s) const;

    std::vector<ProfilePiece> pieces_;
    std::vector<double> offsets_;   // piece starts, plus total length at the end
    std::vector<double> turn_at_;   // cumulative turning at piece starts/end
};

} // namespace bbl
