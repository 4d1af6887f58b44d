#pragma once

#include <stdexcept>
#include <string>

namespace bbl {

// Base class for every library-specific failure.  All carry a message; the
// ones with useful numeric context carry fields as well.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gluing a cycle of blocks did not come back to the start.
struct ClosureError : Error {
    double turning_defect;
    double endpoint_gap;
    ClosureError(const std::string& msg, double turn_defect, double gap)
        : Error(msg), turning_defect(turn_defect), endpoint_gap(gap) {}
};

// Curvature dropped to or below the convexity floor.
struct ConvexityError : Error {
    double min_kappa;
    ConvexityError(const std::string& msg, double mk) : Error(msg), min_kappa(mk) {}
};

// Newton solve for the constrained bump amplitudes did not converge.
struct ConstraintSolveError : Error {
    using Error::Error;
};

// A trajectory iteration exceeded its bounce cap.
struct IterationCap : Error {
    using Error::Error;
};

// A ray left an open block through an endpoint. Not a failure: shoot_wall
// catches it to finish a shot; it only escalates if a caller iterates an open
// block as if it were closed.
struct EscapedWall : Error {
    double exit_point_x;
    double exit_point_y;
    double exit_angle;
    EscapedWall(double px, double py, double angle)
        : Error("ray escaped the open block"), exit_point_x(px), exit_point_y(py),
          exit_angle(angle) {}
};

// A closed orbit did not come back to its start within tolerance.
struct ClosureFailure : Error {
    double residual;
    ClosureFailure(const std::string& msg, double r) : Error(msg), residual(r) {}
};

// The escape count never changed over the perturbation sweep.
struct NoDiscontinuity : Error {
    using Error::Error;
};

// Every located jump had even parity (symmetric mid-chord, no midpoint bounce).
struct NoOddJump : Error {
    using Error::Error;
};

// No admissible support interval of the minimum width remains.
struct SupportExhausted : Error {
    using Error::Error;
};

// The permutation is congruent to the identity gluing (rotation/reflection).
struct InvalidPermutation : Error {
    using Error::Error;
};

// Least-squares normal system too ill-conditioned to trust.
struct IllConditioned : Error {
    double condition;
    IllConditioned(const std::string& msg, double c) : Error(msg), condition(c) {}
};

// An iterative optimizer ran out of sweeps.
struct NoConvergence : Error {
    using Error::Error;
};

// Text-format parse failure; carries the 1-based line number and offending key.
struct ParseError : Error {
    long line;
    std::string key;
    ParseError(const std::string& msg, long ln, std::string k = {})
        : Error(msg), line(ln), key(std::move(k)) {}
};

} // namespace bbl
