#pragma once

// Shared fixtures: canonical tables and a reflection-law residual meter.

#include <cmath>
#include <vector>

#include "bbl/construction.hpp"
#include "bbl/dynamics.hpp"
#include "bbl/table.hpp"

namespace testutil {

inline bbl::BilliardTable unit_circle(int n = 4) {
    return bbl::close_table(bbl::init_circle_blocks(n));
}

// Four fingerprinted quarter-circle blocks: a deterministic, strictly convex,
// non-circular table for property tests.
inline std::vector<bbl::BuildingBlock> bumpy_blocks(double epsilon = 0.02,
                                                    std::uint64_t seed = 77) {
    return bbl::fingerprint_perturb(bbl::init_circle_blocks(4), epsilon, seed);
}

inline bbl::BilliardTable bumpy_table(double epsilon = 0.02, std::uint64_t seed = 77) {
    return bbl::close_table(bumpy_blocks(epsilon, seed));
}

// Oval of alternating circle arcs (radii 1 and r), each block a quarter turn.
// Closes exactly by the half-turn symmetry of the A,B,A,B arrangement.
inline bbl::BilliardTable oval_table(double r = 1.3) {
    const double quarter = std::acos(-1.0) / 2.0;
    bbl::BuildingBlock a(1.0, quarter);
    bbl::BuildingBlock b(1.0 / r, r * quarter);
    return bbl::close_table({a, b, a, b});
}

// Maximum reflection-law violation over an orbit: at every bounce the angle
// between the incoming chord and the tangent must equal the angle between the
// tangent and the outgoing chord.
inline double max_reflection_residual(const bbl::BilliardTable& table, const bbl::Orbit& orbit) {
    const std::size_t m = orbit.states.size();
    if (m < 3) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const bbl::Vec2 prev = table.point(orbit.states[(i + m - 1) % m].s);
        const bbl::Vec2 here = table.point(orbit.states[i].s);
        const bbl::Vec2 next = table.point(orbit.states[(i + 1) % m].s);
        const bbl::Vec2 tangent = bbl::unit_dir(table.theta(orbit.states[i].s));
        const bbl::Vec2 in = bbl::normalized(here - prev);
        const bbl::Vec2 out = bbl::normalized(next - here);
        const double ang_in = std::atan2(bbl::cross(in, tangent), bbl::dot(in, tangent));
        const double ang_out = std::atan2(bbl::cross(tangent, out), bbl::dot(tangent, out));
        worst = std::max(worst, std::fabs(ang_in - ang_out));
    }
    return worst;
}

}  // namespace testutil
