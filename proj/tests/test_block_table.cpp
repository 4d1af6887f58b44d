// Building blocks, gluing, table closure, congruence distance.

#include <cmath>
#include <vector>

#include "doctest.h"

#include "bbl/block.hpp"
#include "bbl/errors.hpp"
#include "bbl/table.hpp"
#include "test_util.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("fast") {

TEST_CASE("unit quarter-circle block basics") {
    bbl::BuildingBlock b(1.0, kPi / 2.0);
    CHECK(b.turning() == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(b.chord() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(b.endpoint().x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.endpoint().y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.min_kappa() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("block constructor rejects invariant violations") {
    // Asymmetric bump set.
    CHECK_THROWS_AS(bbl::BuildingBlock(1.0, 1.0, {{0.3, 0.05, 0.2}}), bbl::Error);
    // Turning reaches pi (half circle): not a building block.
    CHECK_THROWS_AS(bbl::BuildingBlock(1.0, kPi), bbl::Error);
    // Deep negative bumps push curvature below zero: peak depth is amp/e, so
    // any amplitude under -e breaks strict convexity.
    CHECK_THROWS_AS(
        bbl::BuildingBlock(1.0, 2.0, {{0.6, 0.2, -3.0}, {1.4, 0.2, -3.0}}),
        bbl::ConvexityError);
}

TEST_CASE("block symmetry holds pointwise") {
    const double a = 2.0;
    bbl::BuildingBlock b(0.9, a, {{0.5, 0.15, 0.3}, {a - 0.5, 0.15, 0.3}});
    for (int i = 0; i <= 10000; ++i) {
        const double s = a * i / 10000.0;
        CHECK(std::fabs(b.kappa(s) - b.kappa(a - s)) <= 1e-15);
    }
}

TEST_CASE("glue concatenates arc length exactly and is associative") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    bbl::BuildingBlock h(1.0, kPi / 3.0);
    auto [prof12, motion] = bbl::glue(q, h);
    CHECK(prof12.length() == kPi / 2.0 + kPi / 3.0);
    CHECK(motion.angle == doctest::Approx(kPi / 2.0).epsilon(1e-14));

    // Associativity of the concatenated profile.
    bbl::CurvatureProfile lhs = bbl::glue(q, h).first.concat(q.profile());
    bbl::CurvatureProfile rhs = q.profile().concat(h.profile().concat(q.profile()));
    CHECK(lhs.length() == rhs.length());
    for (double s = 0.01; s < lhs.length(); s += 0.13)
        CHECK(lhs.kappa(s) == doctest::Approx(rhs.kappa(s)).epsilon(1e-15));
}

TEST_CASE("quarter + quarter glue to a half-circle profile") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    auto [prof, motion] = bbl::glue(q, q);
    CHECK(prof.length() == doctest::Approx(kPi).epsilon(1e-15));
    for (double s = 0.0; s <= kPi; s += 0.1) CHECK(prof.kappa(s) == 1.0);
    CHECK(motion.shift.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(motion.shift.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("four quarter circles close to the unit circle") {
    bbl::BilliardTable t = testutil::unit_circle(4);
    CHECK(t.length() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(t.block_count() == 4);
    // Boundary wraps: the point at s = length reproduces the start.
    bbl::Vec2 start = t.point(0.0);
    bbl::Vec2 wrap = t.point(t.length());
    CHECK((wrap - start).norm() <= 1e-10);
    // Joints sit at multiples of pi/2.
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(t.joints()[k] == doctest::Approx(k * kPi / 2.0).epsilon(1e-12));
    // The curve is the unit circle: all points at distance 1 from the center.
    bbl::Vec2 center = {0.0, 1.0};
    for (double s = 0.0; s < t.length(); s += 0.37)
        CHECK((t.point(s) - center).norm() == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("mismatched radii refuse to close") {
    bbl::BuildingBlock unit(1.0, kPi / 2.0);
    bbl::BuildingBlock big(0.5, kPi);  // radius-2 quarter turn: turning pi/2
    CHECK(big.turning() == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(bbl::close_table({unit, unit, unit, big}), bbl::ClosureError);
    try {
        bbl::close_table({unit, unit, unit, big});
    } catch (const bbl::ClosureError& e) {
        CHECK(std::fabs(e.turning_defect) <= 1e-10);  // turnings do sum to 2 pi
        CHECK(e.endpoint_gap > 0.1);                  // but the chain does not return
    }
}

TEST_CASE("perturbed blocks close in any order") {
    std::vector<bbl::BuildingBlock> blocks = testutil::bumpy_blocks();
    CHECK_NOTHROW(bbl::close_table({blocks[0], blocks[1], blocks[2], blocks[3]}));
    CHECK_NOTHROW(bbl::close_table({blocks[0], blocks[2], blocks[1], blocks[3]}));
    CHECK_NOTHROW(bbl::close_table({blocks[3], blocks[1], blocks[2], blocks[0]}));
}

TEST_CASE("congruence distance is shift and flip invariant") {
    std::vector<bbl::BuildingBlock> blocks = testutil::bumpy_blocks();
    bbl::BilliardTable t1 = bbl::close_table(blocks);
    // Start-point shift: rotate the block list.
    bbl::BilliardTable t2 = bbl::close_table({blocks[1], blocks[2], blocks[3], blocks[0]});
    CHECK(bbl::congruence_distance(t1, t2) <= 1e-10);
    // Orientation flip: reverse the block list (symmetric blocks are their own mirrors).
    bbl::BilliardTable t3 = bbl::close_table({blocks[3], blocks[2], blocks[1], blocks[0]});
    CHECK(bbl::congruence_distance(t1, t3) <= 1e-10);
}

TEST_CASE("congruence distance separates circle from non-circle") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    bbl::BilliardTable circle6 = testutil::unit_circle(6);
    CHECK(bbl::congruence_distance(circle, circle6) <= 1e-10);
    bbl::BilliardTable bumpy = testutil::bumpy_table();
    CHECK(bbl::congruence_distance(circle, bumpy) > 1e-6);
}

TEST_CASE("tables of different length report the length gap") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    bbl::BilliardTable oval = testutil::oval_table();
    CHECK(bbl::congruence_distance(circle, oval) >=
          std::fabs(circle.length() - oval.length()) - 1e-12);
}

}  // TEST_SUITE
