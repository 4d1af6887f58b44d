// Billiard map, wall shots, matching detection, closed orbits.

#include <cmath>
#include <vector>

#include "doctest.h"

#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

double mod_dist(double a, double b, double period) {
    double d = std::fmod(std::fabs(a - b), period);
    return std::min(d, period - d);
}

}  // namespace

TEST_SUITE("fast") {

TEST_CASE("circle bounce advances the arc by 2 phi") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    bbl::PhaseState st{0.0, kPi / 4.0};
    bbl::PhaseState nx = bbl::next_bounce(circle, st);
    CHECK(std::fabs(nx.s - kPi / 2.0) <= 1e-12);
    CHECK(std::fabs(nx.phi - kPi / 4.0) <= 1e-12);
    CHECK((circle.point(nx.s) - circle.point(st.s)).norm() ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // Diameter shot.
    bbl::PhaseState half = bbl::next_bounce(circle, {0.0, kPi / 2.0});
    CHECK(std::fabs(half.s - kPi) <= 1e-12);
    CHECK(std::fabs(half.phi - kPi / 2.0) <= 1e-12);
}

TEST_CASE("circle advance law s -> s + 2 phi holds across angles and starts") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    for (int i = 1; i <= 50; ++i) {
        const double phi = 0.03 + (kPi - 0.06) * i / 51.0;
        const double s0 = std::fmod(2.39996 * i, circle.length());
        bbl::PhaseState nx = bbl::next_bounce(circle, {s0, phi});
        CHECK(mod_dist(nx.s, s0 + 2.0 * phi, circle.length()) <= 1e-12);
        CHECK(std::fabs(nx.phi - phi) <= 1e-12);
    }
}

TEST_CASE("wall shot on the quarter circle at theta = pi/8 hits the midpoint") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    bbl::WallShot shot = bbl::shoot_wall(q, kPi / 8.0);
    REQUIRE(!shot.bounces.empty());
    CHECK(std::fabs(shot.bounces[0] - kPi / 4.0) <= 1e-9);
    // The second hit lands exactly on the far endpoint; both readings of the
    // tie are legal: a recorded bounce at s = a, or an escape directly after
    // the midpoint bounce.
    if (shot.bounces.size() >= 2) CHECK(std::fabs(shot.bounces[1] - kPi / 2.0) <= 1e-9);
    CHECK(std::fabs(shot.exit_angle - kPi / 8.0) <= 1e-6);
}

TEST_CASE("wall shot at theta = pi/10 escapes without a midpoint hit") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    bbl::WallShot shot = bbl::shoot_wall(q, kPi / 10.0);
    REQUIRE(shot.bounces.size() >= 2);
    CHECK(std::fabs(shot.bounces[0] - kPi / 5.0) <= 1e-9);
    CHECK(std::fabs(shot.bounces[1] - 2.0 * kPi / 5.0) <= 1e-9);
    for (double s : shot.bounces) CHECK(std::fabs(s - kPi / 4.0) > 1e-3);
}

TEST_CASE("is_match on the quarter circle") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    const double tol = 1e-9 * q.length();

    bbl::MatchInfo m1 = bbl::is_match(q, kPi / 8.0, tol);
    CHECK(m1.matched);
    CHECK(m1.p == 1);
    CHECK(std::fabs(m1.residual) <= tol);

    bbl::MatchInfo m3 = bbl::is_match(q, kPi / 24.0, tol);
    CHECK(m3.matched);
    CHECK(m3.p == 3);

    bbl::MatchInfo bad = bbl::is_match(q, 0.37, tol);
    CHECK(!bad.matched);
}

TEST_CASE("matched wall shots are symmetric under s -> a - s") {
    bbl::BuildingBlock q(1.0, kPi / 2.0);
    const double a = q.length();
    bbl::WallShot shot = bbl::shoot_wall(q, kPi / 16.0);
    std::vector<double> interior;
    for (double s : shot.bounces)
        if (s < a - 1e-9) interior.push_back(s);
    REQUIRE(interior.size() >= 3);
    for (double s : interior) {
        bool has_mirror = false;
        for (double t : interior)
            if (std::fabs(t - (a - s)) <= 1e-10) has_mirror = true;
        CHECK(has_mirror);
    }
    CHECK(std::fabs(shot.exit_angle - kPi / 16.0) <= 1e-6);
}

TEST_CASE("closed orbit on the circle at theta = pi/8 is the regular octagon") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    bbl::Orbit orbit = bbl::closed_orbit_from_match(circle, kPi / 8.0);
    CHECK(orbit.closed);
    CHECK(orbit.period == 8);
    CHECK(orbit.perimeter == doctest::Approx(16.0 * std::sin(kPi / 8.0)).epsilon(1e-10));
    CHECK(testutil::max_reflection_residual(circle, orbit) <= 1e-10);
}

TEST_CASE("non-matching angle fails closure") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    CHECK_THROWS_AS(bbl::closed_orbit_from_match(circle, 0.37), bbl::ClosureFailure);
}

TEST_CASE("maximal n-gons on the circle hit 2 n sin(pi/n)") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    for (int n : {4, 8, 16, 32}) {
        bbl::Orbit orbit = bbl::max_perimeter_ngon(circle, n);
        CHECK(orbit.perimeter == doctest::Approx(2.0 * n * std::sin(kPi / n)).epsilon(1e-10));
        CHECK(orbit.period == n);
        CHECK(testutil::max_reflection_residual(circle, orbit) <= 1e-10);
    }
}

TEST_CASE("n-gon perimeters increase with n and stay below the boundary length") {
    bbl::BilliardTable bumpy = testutil::bumpy_table();
    double prev = 0.0;
    for (int n = 4; n <= 12; ++n) {
        bbl::Orbit orbit = bbl::max_perimeter_ngon(bumpy, n);
        CHECK(orbit.perimeter > prev);
        CHECK(orbit.perimeter < bumpy.length());
        prev = orbit.perimeter;
    }
}

TEST_CASE("time reversal reproduces the forward bounce set") {
    bbl::BilliardTable bumpy = testutil::bumpy_table();
    const int steps = 100;
    bbl::Orbit fwd = bbl::trace_orbit(bumpy, {0.3, 0.7}, steps);
    const bbl::PhaseState& last = fwd.states.back();
    bbl::Orbit bwd = bbl::trace_orbit(bumpy, {last.s, kPi - last.phi}, steps);
    for (int k = 0; k <= steps; ++k) {
        const double s_fwd = fwd.states[static_cast<std::size_t>(steps - k)].s;
        const double s_bwd = bwd.states[static_cast<std::size_t>(k)].s;
        CHECK(mod_dist(s_fwd, s_bwd, bumpy.length()) <= 1e-9);
    }
}

}  // TEST_SUITE

TEST_SUITE("slow") {

TEST_CASE("next_bounce agrees with the dense-grid intersection oracle") {
    bbl::BilliardTable bumpy = testutil::bumpy_table();
    const double len = bumpy.length();
    struct Case {
        double s, phi;
    };
    for (const Case& c : {Case{0.5, 0.9}, Case{2.3, 0.35}, Case{4.4, 1.9}}) {
        bbl::PhaseState nx = bbl::next_bounce(bumpy, {c.s, c.phi});
        const bbl::Vec2 dir = bbl::unit_dir(bumpy.theta(c.s) + c.phi);
        const double hit = oracle::ray_hit_dense(bumpy, c.s, dir, 1000000);
        REQUIRE(hit > 0.0);
        CHECK(mod_dist(nx.s, hit, len) <= 1e-9);
    }
}

TEST_CASE("maximal 512-gon on the circle") {
    bbl::BilliardTable circle = testutil::unit_circle(4);
    bbl::Orbit orbit = bbl::max_perimeter_ngon(circle, 512);
    CHECK(orbit.perimeter == doctest::Approx(2.0 * 512 * std::sin(kPi / 512)).epsilon(1e-10));
}

}  // TEST_SUITE
