// Curvature-profile kernel: bump closed forms, symmetry, turning integrals.

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"

#include "bbl/bump.hpp"
#include "bbl/profile.hpp"

namespace {

// Fixed-step Simpson rule, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / (2.0 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_SUITE("fast") {

TEST_CASE("bump value endpoints and peak") {
    CHECK(bbl::bump_value(-1.0) == 0.0);
    CHECK(bbl::bump_value(1.0) == 0.0);
    CHECK(bbl::bump_value(-1.5) == 0.0);
    CHECK(bbl::bump_value(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(bbl::bump_d1(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("bump derivatives match central differences") {
    const double h = 1e-6;
    for (double u : {-0.9, -0.5, -0.2, 0.1, 0.4, 0.75, 0.95}) {
        const double d1_fd = (bbl::bump_value(u + h) - bbl::bump_value(u - h)) / (2.0 * h);
        const double d2_fd =
            (bbl::bump_value(u + h) - 2.0 * bbl::bump_value(u) + bbl::bump_value(u - h)) / (h * h);
        CHECK(bbl::bump_d1(u) == doctest::Approx(d1_fd).epsilon(1e-7));
        CHECK(bbl::bump_d2(u) == doctest::Approx(d2_fd).epsilon(2e-4));
    }
}

TEST_CASE("bump antiderivative matches fixed-step quadrature") {
    for (double u : {-0.8, -0.3, 0.0, 0.45, 0.9, 1.0}) {
        const double ref = simpson([](double t) { return bbl::bump_value(t); }, -1.0, u, 4000);
        CHECK(bbl::bump_antiderivative(u) == doctest::Approx(ref).epsilon(1e-11));
    }
    CHECK(bbl::bump_antiderivative(1.0) == doctest::Approx(bbl::bump_total_integral()).epsilon(1e-15));
    CHECK(bbl::bump_antiderivative(-1.0) == 0.0);
    CHECK(bbl::bump_antiderivative(2.0) == doctest::Approx(bbl::bump_total_integral()).epsilon(1e-15));
}

TEST_CASE("profile evaluates base plus bumps with exact symmetry") {
    const double a = 1.7;
    std::vector<bbl::Bump> bumps{{0.5, 0.12, 0.3}, {a - 0.5, 0.12, 0.3}, {0.7, 0.05, -0.2},
                                 {a - 0.7, 0.05, -0.2}};
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(1.1, a, bumps);
    CHECK(prof.length() == a);
    for (int i = 0; i <= 1024; ++i) {
        const double s = a * i / 1024.0;
        CHECK(std::fabs(prof.kappa(s) - prof.kappa(a - s)) <= 1e-15);
    }
    // Off-bump regions evaluate to the base exactly.
    CHECK(prof.kappa(0.05) == 1.1);
    CHECK(prof.kappa(a - 0.05) == 1.1);
}

TEST_CASE("turning integral matches fixed-step quadrature") {
    const double a = 2.0;
    std::vector<bbl::Bump> bumps{{0.6, 0.2, 0.5}, {a - 0.6, 0.2, 0.5}};
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(0.9, a, bumps);
    for (double s : {0.3, 0.55, 0.8, 1.1, 1.6, 2.0}) {
        const double ref = simpson([&](double t) { return prof.kappa(t); }, 0.0, s, 6000);
        CHECK(prof.turning(s) == doctest::Approx(ref).epsilon(1e-11));
    }
    CHECK(prof.total_turning() == doctest::Approx(prof.turning(a)).epsilon(1e-15));
}

TEST_CASE("derivatives of the profile match central differences") {
    const double a = 1.5;
    std::vector<bbl::Bump> bumps{{0.4, 0.15, 0.25}, {a - 0.4, 0.15, 0.25}};
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(1.0, a, bumps);
    const double h = 1e-6;
    for (double s : {0.35, 0.42, 0.5, 1.02, 1.13}) {
        const double d1_fd = (prof.kappa(s + h) - prof.kappa(s - h)) / (2.0 * h);
        const double d2_fd = (prof.kappa(s + h) - 2.0 * prof.kappa(s) + prof.kappa(s - h)) / (h * h);
        CHECK(prof.kappa_d1(s) == doctest::Approx(d1_fd).epsilon(1e-6));
        CHECK(prof.kappa_d2(s) == doctest::Approx(d2_fd).epsilon(2e-3));
    }
}

TEST_CASE("min_kappa finds the dip of a negative bump") {
    const double a = 2.0;
    const double amp = 0.5;
    std::vector<bbl::Bump> bumps{{0.6, 0.2, -amp}, {a - 0.6, 0.2, -amp}};
    bbl::CurvatureProfile prof = bbl::CurvatureProfile::single(1.0, a, bumps);
    // Non-overlapping bumps: the minimum sits at a bump center, value 1 - amp*e^{-1}.
    CHECK(prof.min_kappa() == doctest::Approx(1.0 - amp * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("concat stacks pieces and preserves length and turning") {
    bbl::CurvatureProfile p1 = bbl::CurvatureProfile::single(1.0, 1.0);
    bbl::CurvatureProfile p2 = bbl::CurvatureProfile::single(2.0, 0.5);
    bbl::CurvatureProfile cat = p1.concat(p2);
    CHECK(cat.length() == 1.5);
    CHECK(cat.piece_count() == 2);
    CHECK(cat.kappa(0.3) == 1.0);
    CHECK(cat.kappa(1.2) == 2.0);
    CHECK(cat.total_turning() == doctest::Approx(1.0 + 1.0).epsilon(1e-15));
}

}  // TEST_SUITE
