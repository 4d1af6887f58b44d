// Maximal-perimeter polygons on a non-circular oval vs the ascent oracle.

#include <cmath>

#include "doctest.h"

#include "bbl/dynamics.hpp"
#include "test_util.hpp"
#include "oracles.hpp"

TEST_SUITE("fast") {

TEST_CASE("oval table is closed, convex and non-circular") {
    bbl::BilliardTable oval = testutil::oval_table(1.3);
    CHECK(oval.block_count() == 4);
    CHECK((oval.point(oval.length()) - oval.point(0.0)).norm() <= 1e-10);
    bbl::BilliardTable circle = testutil::unit_circle(4);
    CHECK(bbl::congruence_distance(circle, oval) > 0.1);
}

TEST_CASE("oval polygon perimeters are monotone in n") {
    bbl::BilliardTable oval = testutil::oval_table(1.3);
    double prev = 0.0;
    for (int n : {3, 5, 8, 13, 21}) {
        bbl::Orbit orbit = bbl::max_perimeter_ngon(oval, n);
        CHECK(orbit.perimeter > prev);
        CHECK(orbit.perimeter < oval.length());
        CHECK(testutil::max_reflection_residual(oval, orbit) <= 1e-10);
        prev = orbit.perimeter;
    }
}

}  // TEST_SUITE

TEST_SUITE("slow") {

TEST_CASE("oval 100-gon matches the multi-start ascent oracle") {
    bbl::BilliardTable oval = testutil::oval_table(1.3);
    bbl::Orbit orbit = bbl::max_perimeter_ngon(oval, 100);
    const double ref = oracle::ngon_perimeter_ascent(oval, 100, 4);
    CHECK(std::fabs(orbit.perimeter - ref) / ref <= 1e-8);
    CHECK(orbit.perimeter + 1e-9 >= ref);  // the library result is the maximizer
}

TEST_CASE("bumpy-table 64-gon matches the ascent oracle") {
    bbl::BilliardTable bumpy = testutil::bumpy_table();
    bbl::Orbit orbit = bbl::max_perimeter_ngon(bumpy, 64);
    const double ref = oracle::ngon_perimeter_ascent(bumpy, 64, 4);
    CHECK(std::fabs(orbit.perimeter - ref) / ref <= 1e-8);
}

}  // TEST_SUITE
