#include <heston/densities.hpp>
#include <heston/errors.hpp>
#include <heston/params.hpp>
#include <heston/quadrature.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using Catch::Approx;

namespace {
const heston::heston_params base = heston::validate_params(1.7, 4.0, 2.0, 0.05, 0.0);
}

TEST_CASE("transition density matches the reference values", "[densities]") {
    CHECK(heston::transition_density(base, 3.0, 4.0, 1.0) ==
          Approx(0.21176034532142964).epsilon(1e-13));
    CHECK(heston::transition_density(base, 4.2, 4.0, 0.05) ==
          Approx(0.43434279820903923).epsilon(1e-13));
    CHECK(heston::transition_density(base, 0.3, 6.0, 0.2) ==
          Approx(1.341457284885215e-5).epsilon(1e-13));
    CHECK(heston::transition_density(base, 9.0, 2.0, 2.0) ==
          Approx(0.016665843482558441).epsilon(1e-13));
}

TEST_CASE("log and plain transition densities are consistent", "[densities]") {
    for (const double z : {0.4, 2.0, 5.5, 11.0}) {
        for (const double y : {0.8, 4.0, 7.0}) {
            INFO("z = " << z << ", y = " << y);
            CHECK(std::exp(heston::log_transition_density(base, z, y, 0.7)) ==
                  Approx(heston::transition_density(base, z, y, 0.7)).epsilon(1e-13));
        }
    }
}

TEST_CASE("transition density integrates to one", "[densities]") {
    for (const double y : {1.5, 4.0}) {
        for (const double t : {0.25, 1.0}) {
            const auto r = heston::integrate(
                [&](double z) {
                    return z <= 0.0 ? 0.0 : heston::transition_density(base, z, y, t);
                },
                0.0, 80.0, 1e-10, 1e-11);
            INFO("y = " << y << ", t = " << t);
            CHECK(r.value == Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("noncentral chi-squared log density reference values", "[densities]") {
    CHECK(heston::log_ncchi2_density(3.0, 6.8, 2.0) ==
          Approx(-2.8911747017802612).epsilon(1e-13));
    CHECK(heston::log_ncchi2_density(0.7, 1.0, 0.5) ==
          Approx(-1.1749475740290113).epsilon(1e-13));
    CHECK(heston::log_ncchi2_density(10.0, 4.0, 9.0) ==
          Approx(-2.7393614430318429).epsilon(1e-13));
    // zero noncentrality reduces to the central chi-squared, dfr < 2 included
    CHECK(heston::log_ncchi2_density(1.2, 0.9, 0.0) ==
          Approx(-1.6892801929661151).epsilon(1e-13));
}

TEST_CASE("the rescaled transition law is noncentral chi-squared", "[densities]") {
    const heston::derived_constants d(base);
    for (const double y : {1.0, 4.0, 6.5}) {
        for (const double t : {0.2, 1.0, 2.0}) {
            const double two_lam = 2.0 * d.lambda(t);
            const double ncp = two_lam * y * d.nu(t);
            for (const double z : {0.5, 3.0, 8.0}) {
                const double lhs = heston::log_transition_density(base, z, y, t);
                const double rhs = std::log(two_lam) +
                                   heston::log_ncchi2_density(two_lam * z, d.dfr(), ncp);
                INFO("y = " << y << ", t = " << t << ", z = " << z);
                CHECK(lhs == Approx(rhs).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("stationary density is the Gamma(r+1, 1/Lambda) law", "[densities]") {
    CHECK(heston::stationary_density(base, 0.5) ==
          Approx(0.023910307103754278).epsilon(1e-13));
    CHECK(heston::stationary_density(base, 2.0) ==
          Approx(0.18612455352884693).epsilon(1e-13));
    CHECK(heston::stationary_density(base, 4.0) ==
          Approx(0.17946304792154343).epsilon(1e-13));
    CHECK(heston::stationary_density(base, 8.0) ==
          Approx(0.031611549961362873).epsilon(1e-13));
    CHECK(heston::stationary_density(base, 20.0) ==
          Approx(1.0594930101608366e-5).epsilon(1e-13));
    CHECK(heston::log_stationary_density(base, 0.5) ==
          Approx(-3.733445653439045).epsilon(1e-13));
    CHECK(heston::log_stationary_density(base, 20.0) ==
          Approx(-11.455134963565598).epsilon(1e-13));
}

TEST_CASE("stationary density normalizes and peaks at r/Lambda", "[densities]") {
    const auto r = heston::integrate(
        [&](double z) { return z <= 0.0 ? 0.0 : heston::stationary_density(base, z); },
        0.0, 60.0, 1e-10, 1e-11);
    CHECK(r.value == Approx(1.0).epsilon(1e-9));
    const double mode = 2.8235294117647059;  // r / Lambda
    const double at_mode = heston::stationary_density(base, mode);
    CHECK(at_mode > heston::stationary_density(base, mode - 0.01));
    CHECK(at_mode > heston::stationary_density(base, mode + 0.01));
}

TEST_CASE("transition density is the stationary fixed point in the long run",
          "[densities]") {
    // p(z, y, T) -> psi(z) as T grows, uniformly on compacts
    for (const double z : {1.0, 3.0, 6.0}) {
        CHECK(heston::transition_density(base, z, 1.3, 40.0) ==
              Approx(heston::stationary_density(base, z)).epsilon(1e-10));
    }
}

TEST_CASE("density domain checks", "[densities]") {
    CHECK_THROWS_AS(heston::transition_density(base, 1.0, -1.0, 1.0), heston::domain_error);
    CHECK_THROWS_AS(heston::transition_density(base, 1.0, 4.0, 0.0), heston::domain_error);
    CHECK_THROWS_AS(heston::log_ncchi2_density(-0.5, 6.8, 2.0), heston::domain_error);
    CHECK_THROWS_AS(heston::log_ncchi2_density(1.0, 0.0, 2.0), heston::domain_error);
    CHECK_THROWS_AS(heston::log_ncchi2_density(1.0, 6.8, -1.0), heston::domain_error);
    CHECK_THROWS_AS(heston::stationary_density(base, -0.1), heston::domain_error);
}
