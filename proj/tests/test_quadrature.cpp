#include <heston/errors.hpp>
#include <heston/quadrature.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using Catch::Approx;

TEST_CASE("polynomials up to degree 13 integrate exactly", "[quadrature]") {
    // K15 is exact through degree 13, so the initial pass already has zero
    // error and no subdivision happens
    const auto r = heston::integrate([](double x) { return std::pow(x, 13.0); }, 0.0, 2.0);
    CHECK(r.value == Approx(std::pow(2.0, 14.0) / 14.0).epsilon(1e-14));
    CHECK(r.evaluations == 120);
}

TEST_CASE("standard integrals hit their closed forms", "[quadrature]") {
    const auto e1 = heston::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0,
                                      1e-12, 1e-13);
    CHECK(e1.value == Approx(1.0 - std::exp(-40.0)).epsilon(1e-12));

    const auto s1 = heston::integrate([](double x) { return std::sin(x); }, 0.0, M_PI,
                                      1e-12, 1e-13);
    CHECK(s1.value == Approx(2.0).epsilon(1e-12));

    // integrable sqrt singularity at the left endpoint
    const auto sq = heston::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300,
                                      1.0, 1e-9, 1e-10);
    CHECK(sq.value == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("a narrow peak far from the midpoint is resolved adaptively", "[quadrature]") {
    const double mu = 0.137;
    const double s = 0.02;
    const auto r = heston::integrate(
        [&](double x) {
            const double z = (x - mu) / s;
            return std::exp(-0.5 * z * z);
        },
        0.0, 10.0, 1e-12, 1e-12);
    const double expected = s * std::sqrt(2.0 * M_PI);
    CHECK(r.value == Approx(expected).epsilon(1e-9));
    CHECK(r.evaluations > 120);  // forced to subdivide past the initial pass
}

TEST_CASE("the reported error bound is honest on smooth integrands", "[quadrature]") {
    const auto r = heston::integrate([](double x) { return std::cos(3.0 * x); }, 0.0, 2.0,
                                     1e-10, 1e-12);
    const double expected = std::sin(6.0) / 3.0;
    CHECK(std::fabs(r.value - expected) <= std::max(r.error_estimate, 1e-14));
}

TEST_CASE("degenerate and reversed intervals are rejected", "[quadrature]") {
    CHECK_THROWS_AS(heston::integrate([](double x) { return x * x; }, 1.0, 1.0),
                    heston::domain_error);
    CHECK_THROWS_AS(heston::integrate([](double x) { return x * x; }, 1.0, 0.0),
                    heston::domain_error);
}

TEST_CASE("an unreachable tolerance raises instead of returning junk", "[quadrature]") {
    // oscillation far below any resolvable width keeps every error estimate
    // pinned; the interval budget must eventually give up
    CHECK_THROWS_AS(
        heston::integrate([](double x) { return std::sin(1e8 * x) + 2.0; }, 0.0, 1.0,
                          1e-12, 1e-13),
        heston::domain_error);
}
