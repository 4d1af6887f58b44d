#pragma once

// Billiard dynamics: the bounce map on closed tables and open blocks, orbit
// tracing, matching-angle detection, and maximal-perimeter n-gons.

#include "bbl/block.hpp"
#include "bbl/table.hpp"

#include <vector>

namespace bbl {

struct PhaseState {
    double s;    // arclength (lifted for tables: grows monotonically across laps)
    double phi;  // angle between outgoing chord and tangent, in (0, pi)
};

struct Orbit {
    std::vector<PhaseState> states;
    std::vector<double> chords;
    double perimeter = 0.0;
    bool closed = false;
    int period = 0;
    double closure_residual = 0.0;
};

struct WallShot {
    std::vector<double> bounces;  // interior bounce arclengths, strictly increasing
    int escape_index = 0;         // number of bounces before the ray leaves
    double exit_angle = 0.0;      // angle of the escaping ray against the end tangent
};

struct MatchInfo {
    bool matched = false;
    int p = 0;          // 1-based index of the bounce nearest the midpoint
    double residual = 0.0;  // signed: s_p - a/2
};

inline constexpr double kParamTolFactor = 1e-13;   // root tolerance, times curve length
inline constexpr int kWallBounceCap = 1000000;
inline constexpr double kMatchTolFactor = 1e-9;    // default midpoint tolerance, times a

PhaseState next_bounce(const BilliardTable& table, const PhaseState& state);

// Throws EscapedWall when the forward ray leaves through the far endpoint.
PhaseState next_bounce(const BuildingBlock& block, const PhaseState& state);

Orbit trace_orbit(const BilliardTable& table, PhaseState start, int bounces);

WallShot shoot_wall(const BuildingBlock& block, double theta);

MatchInfo is_match(const BuildingBlock& block, double theta, double tol);

// Launches from the block-1 start point with angle theta, closes after one
// lap, asserts the closure residual, then polishes the cycle to a true
// critical point of the perimeter (Newton on the reflection conditions).
Orbit closed_orbit_from_match(const BilliardTable& table, double theta);

// Birkhoff maximizer: the inscribed winding-1 n-gon of maximal perimeter.
Orbit max_perimeter_ngon(const BilliardTable& table, int n);

// Newton polish of an n-gon cycle (lifted arclengths, s[n] = s[0] + length)
// to a critical point of the perimeter; returns max reflection residual.
double polish_polygon(const BilliardTable& table, std::vector<double>& s);

} // namespace bbl
