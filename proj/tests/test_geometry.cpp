// Curve reconstruction from curvature vs an independent RK4 oracle.

#include <cmath>

#include "doctest.h"

#include "bbl/geometry.hpp"
#include "bbl/profile.hpp"
#include "oracles.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("fast") {

TEST_CASE("unit quarter circle lands at (1,1) with tangent pi/2") {
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(1.0, kPi / 2.0);
    bbl::GeometrySample g = bbl::eval_geometry(prof, kPi / 2.0);
    CHECK(g.point.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.point.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.theta == doctest::Approx(kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("s = 0 is the local-frame origin") {
    bbl::CurvatureProfile prof =
        bbl::CurvatureProfile::single(0.8, 1.3, {{0.4, 0.1, 0.2}, {0.9, 0.1, 0.2}});
    bbl::GeometrySample g = bbl::eval_geometry(prof, 0.0);
    CHECK(g.point.x == 0.0);
    CHECK(g.point.y == 0.0);
    CHECK(g.theta == 0.0);
}

TEST_CASE("circle arc points lie on the unit circle centered at (0,1)") {
    bbl::GeometryModel model(bbl::CurvatureProfile::single(1.0, 2.0));
    for (double s : {0.2, 0.7, 1.1, 1.9}) {
        bbl::Vec2 p = model.point(s);
        CHECK(p.x == doctest::Approx(std::sin(s)).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(1.0 - std::cos(s)).epsilon(1e-12));
    }
}

}  // TEST_SUITE

TEST_SUITE("slow") {

TEST_CASE("endpoint matches the RK4 oracle on a bumped profile") {
    const double a = kPi / 2.0;
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(
        1.0, a, {{0.35, 0.1, 0.4}, {a - 0.35, 0.1, 0.4}});
    oracle::CurveEnd ref =
        oracle::rk4_endpoint([&](double s) { return prof.kappa(s); }, a, 1000000);
    bbl::GeometrySample g = bbl::eval_geometry(prof, a);
    CHECK(std::fabs(g.point.x - ref.point.x) <= 1e-10);
    CHECK(std::fabs(g.point.y - ref.point.y) <= 1e-10);
    CHECK(std::fabs(g.theta - ref.theta) <= 1e-10);
}

TEST_CASE("random profiles agree with the RK4 oracle") {
    struct Case {
        double base, length;
        std::vector<bbl::Bump> bumps;
    };
    // Hand-rolled "random" profiles: asymmetric bump layouts, varied bases.
    std::vector<Case> cases{
        {0.7, 2.4, {{0.5, 0.2, 0.35}, {1.4, 0.3, -0.15}, {2.0, 0.15, 0.5}}},
        {1.4, 1.1, {{0.3, 0.12, -0.3}, {0.8, 0.18, 0.22}}},
        {2.2, 0.9, {{0.45, 0.25, 0.8}}},
    };
    for (const Case& c : cases) {
        bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(c.base, c.length, c.bumps);
        oracle::CurveEnd ref =
            oracle::rk4_endpoint([&](double s) { return prof.kappa(s); }, c.length, 1000000);
        bbl::GeometrySample g = bbl::eval_geometry(prof, c.length);
        CHECK(std::fabs(g.point.x - ref.point.x) <= 1e-10);
        CHECK(std::fabs(g.point.y - ref.point.y) <= 1e-10);
        // Interior point as well, at 1/3 of the arc.
        oracle::CurveEnd ref3 = oracle::rk4_endpoint(
            [&](double s) { return prof.kappa(s); }, c.length / 3.0, 333334);
        bbl::Vec2 p3 = bbl::eval_geometry(prof, c.length / 3.0).point;
        CHECK(std::fabs(p3.x - ref3.point.x) <= 1e-10);
        CHECK(std::fabs(p3.y - ref3.point.y) <= 1e-10);
    }
}

}  // TEST_SUITE
