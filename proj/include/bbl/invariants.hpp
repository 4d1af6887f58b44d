#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bbl/table.hpp"

namespace bbl {

// Marvizi-Melrose invariants by direct quadrature of the curvature profile:
//   ell0 = boundary length,
//   ell1 = -2 * integral of rho^{2/3} ds,
//   ell2 = (1/1080) * integral of (9 rho^{4/3} + 8 rho^{-8/3} rho'^2) ds,
// with rho = 1/kappa the radius of curvature.
struct MMInvariants {
    double ell0 = 0.0;
    double ell1 = 0.0;
    double ell2 = 0.0;
};

// Weighted least-squares fit of L_n against {1, n^{-2}, ..., n^{-2K}}.
struct ExpansionFit {
    double ell0_fit = 0.0;
    std::vector<double> c;  // c[k-1] multiplies n^{-2k}
    double residual = 0.0;  // unweighted rms over the samples
};

struct DiffEntry {
    std::string name;
    double abs_diff = 0.0;
    double rel_diff = 0.0;  // abs / max(|a|,|b|); 0 when both vanish
};

struct InvariantReport {
    double ell0 = 0.0;
    double ell1_quad = 0.0;
    double ell2_quad = 0.0;
    double ell0_fit = 0.0;
    std::vector<double> fit_c;
    double fit_residual = 0.0;
    std::vector<DiffEntry> counterpart_diffs;
};

struct ComparisonReport {
    InvariantReport a;
    InvariantReport b;
    double congruence_dist = 0.0;
    std::vector<int> n_grid;
    std::vector<double> perimeters_a;
    std::vector<double> perimeters_b;
};

// Per-block adaptive quadrature summed in block order (so the sum over a
// reordering of the same blocks differs only by floating-point reassociation).
MMInvariants mm_quadrature(const BilliardTable& table);

// Invariant integrals of a single block, exposed for reuse by the table sum.
MMInvariants mm_block_integrals(const BuildingBlock& block);

// samples: (n, L_n) pairs, at least K+3 distinct n spanning one octave.
// Weights n^4 emphasize the tail; throws IllConditioned when the equilibrated
// normal system's condition estimate exceeds 1e12.
ExpansionFit fit_expansion(const std::vector<std::pair<int, double>>& samples, int K);

const std::vector<int>& default_n_grid();
inline constexpr int kDefaultFitDegree = 3;

// Runs both invariant computations on both tables over n_grid and fills the
// symmetric counterpart differences plus the non-isometry witness.
ComparisonReport compare_tables(const BilliardTable& a, const BilliardTable& b,
                                const std::vector<int>& n_grid = default_n_grid(),
                                int fit_degree = kDefaultFitDegree);

}  // namespace bbl
