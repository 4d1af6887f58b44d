#pragma once

// Constraint-preserving symmetric perturbations. Four bump pairs mirrored
// about the block midpoint are added inside a support window in (0, a/2); the
// last amplitude is the free parameter (scaled by delta) and the other three
// are solved so the added turning over the window vanishes and the window's
// endpoints do not move. The curve is then pointwise unchanged outside the
// window and its mirror image, so turning, chord, closure, and every
// previously matched trajectory avoiding the window are preserved exactly.

#include "bbl/block.hpp"

#include <array>

namespace bbl {

struct PerturbShape {
    std::array<double, 4> rel_centers{0.13, 0.375, 0.62, 0.865};  // fractions of the window
    double rel_halfwidth = 0.12;                                  // fraction of window width
    std::array<double, 4> sigma{1.0, -1.0, 1.0, -1.0};            // amplitude pattern
};

struct PerturbResult {
    BuildingBlock block;
    std::array<double, 4> amplitudes;  // solved A_1..A_3 and fixed A_4
    double c0_norm;                    // sup |kappa change|
};

// support = [lo, hi] strictly inside (0, a/2). delta = 0 returns the block
// unchanged. Throws ConstraintSolveError (Newton fails within 50 iterations)
// or ConvexityError (min kappa <= 0.2 * base).
PerturbResult perturb_block(const BuildingBlock& block, double support_lo, double support_hi,
                            const PerturbShape& shape, double delta);

} // namespace bbl
