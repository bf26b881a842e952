#include <heston/errors.hpp>
#include <heston/experiments.hpp>
#include <heston/params.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

using Catch::Approx;

namespace {

const heston::heston_params base = heston::validate_params(1.7, 4.0, 2.0, 0.05, 0.0);

heston::mc::lq_study_config small_lq() {
    heston::mc::lq_study_config cfg;
    cfg.params = base;
    cfg.eps_grid = {0.1, 0.05};
    cfg.j_rules = {heston::rv::j_rule::constant(5), heston::rv::j_rule::inverse()};
    cfg.q_list = {2, 4};
    cfg.t_eval = 0.2;
    cfg.n_blocks = 2;
    cfg.block_size = 3;
    cfg.sim.dt = 5e-4;
    cfg.sim.horizon = 0.2;
    cfg.sim.seed = 21;
    return cfg;
}

heston::mc::estimator_study_config small_estimator() {
    heston::mc::estimator_study_config cfg;
    cfg.params = base;
    cfg.eps_grid = {0.1, 0.05};
    cfg.scheme.j = heston::rv::j_rule::inverse();
    cfg.scheme.c_n = 1.0;
    cfg.lags = {0.6};
    cfg.mc = 3;
    cfg.sim.dt = 5e-4;
    cfg.sim.seed = 13;
    return cfg;
}

}  // namespace

TEST_CASE("slope fits recover an exact power law", "[experiments]") {
    std::vector<std::pair<double, double>> points;
    for (const double eps : {0.1, 0.05, 0.02, 0.01}) {
        points.emplace_back(eps, 3.0 * std::sqrt(eps));
    }
    const auto fit = heston::mc::slope_fit(points);
    CHECK(fit.slope == Approx(0.5).epsilon(1e-12));
    CHECK(fit.intercept == Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit.max_residual < 1e-12);
}

TEST_CASE("a flat series fits slope exactly zero", "[experiments]") {
    const std::vector<std::pair<double, double>> points{
        {0.1, 2.5}, {0.05, 2.5}, {0.02, 2.5}};
    const auto fit = heston::mc::slope_fit(points);
    CHECK(fit.slope == 0.0);
    CHECK(fit.intercept == Approx(std::log(2.5)));
    CHECK(fit.max_residual == 0.0);
}

TEST_CASE("degenerate slope inputs throw", "[experiments]") {
    const std::vector<std::pair<double, double>> one{{0.1, 1.0}};
    CHECK_THROWS_AS(heston::mc::slope_fit(one), heston::domain_error);
    const std::vector<std::pair<double, double>> bad{{0.1, 1.0}, {0.05, -1.0}};
    CHECK_THROWS_AS(heston::mc::slope_fit(bad), heston::domain_error);
    const std::vector<std::pair<double, double>> same_x{{0.1, 1.0}, {0.1, 2.0}};
    CHECK_THROWS_AS(heston::mc::slope_fit(same_x), heston::domain_error);
}

TEST_CASE("block statistics match a hand calculation", "[experiments]") {
    const std::vector<double> powers{1.0, 1.0, 4.0, 4.0};
    const auto s = heston::mc::block_statistics(powers, 2, 2, 2);
    CHECK(s.estimate == Approx(1.5).epsilon(1e-15));
    CHECK(s.sigma == Approx(0.5).epsilon(1e-15));
    CHECK(s.ci_low == Approx(1.5 - 1.96 * 0.5).epsilon(1e-14));
    CHECK(s.ci_high == Approx(1.5 + 1.96 * 0.5).epsilon(1e-14));
    CHECK(s.se == Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("an exact reconstruction gives a zero error with zero width", "[experiments]") {
    const std::vector<double> powers(6, 0.0);
    const auto s = heston::mc::block_statistics(powers, 3, 2, 2);
    CHECK(s.estimate == 0.0);
    CHECK(s.sigma == 0.0);
    CHECK(s.ci_low == 0.0);
    CHECK(s.ci_high == 0.0);
}

TEST_CASE("block statistics validate their shape", "[experiments]") {
    const std::vector<double> powers{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(heston::mc::block_statistics(powers, 1, 3, 2), heston::domain_error);
    CHECK_THROWS_AS(heston::mc::block_statistics(powers, 2, 2, 2), heston::domain_error);
    CHECK_THROWS_AS(heston::mc::block_statistics(powers, 3, 1, 0), heston::domain_error);
}

TEST_CASE("a small lq study produces coherent cells and slopes", "[experiments]") {
    const auto report = heston::mc::lq_error_study(small_lq());
    REQUIRE(report.cells.size() == 8);  // 2 eps x 2 rules x 2 q
    for (const auto& c : report.cells) {
        CHECK(c.estimate > 0.0);
        CHECK(c.sigma >= 0.0);
        CHECK(c.ci_low <= c.estimate);
        CHECK(c.ci_high >= c.estimate);
        CHECK(c.se == Approx(c.sigma / std::sqrt(2.0)).epsilon(1e-14));
    }
    const auto& cell = report.cell(0.05, "J=1/eps", 2);
    CHECK(cell.j == 20);
    CHECK(cell.q == 2);

    // two grid points: no asymptotic cut, both epsilons enter each fit
    const auto& sl = report.slope("J=1/eps", "L2");
    CHECK_FALSE(sl.restricted);
    CHECK(sl.eps_used.size() == 2);
    CHECK(report.slope("J=5", "L4").eps_used.size() == 2);
    CHECK_THROWS_AS(report.slope("J=1/eps", "L6"), heston::domain_error);
}

TEST_CASE("lq studies are reproducible across thread counts", "[experiments]") {
    auto cfg = small_lq();
    cfg.sim.jobs = 1;
    const auto serial = heston::mc::lq_error_study(cfg);
    cfg.sim.jobs = 3;
    const auto threaded = heston::mc::lq_error_study(cfg);
    REQUIRE(serial.cells.size() == threaded.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(serial.cells[i].estimate == threaded.cells[i].estimate);
        CHECK(serial.cells[i].sigma == threaded.cells[i].sigma);
    }
}

TEST_CASE("misconfigured lq studies fail before simulating", "[experiments]") {
    auto cfg = small_lq();
    cfg.n_blocks = 1;
    CHECK_THROWS_AS(heston::mc::lq_error_study(cfg), heston::config_error);

    cfg = small_lq();
    cfg.t_eval = 0.5;  // beyond the configured horizon
    CHECK_THROWS_AS(heston::mc::lq_error_study(cfg), heston::config_error);

    cfg = small_lq();
    cfg.j_rules = {heston::rv::j_rule::constant(3)};  // 200 window steps, 3 does not divide
    CHECK_THROWS_AS(heston::mc::lq_error_study(cfg), heston::config_error);

    cfg = small_lq();
    cfg.eps_grid.clear();
    CHECK_THROWS_AS(heston::mc::lq_error_study(cfg), heston::config_error);
}

TEST_CASE("a small estimator study reports every quantity", "[experiments]") {
    const auto report = heston::mc::estimator_error_study(small_estimator());
    for (const char* name : {"theta", "kappa", "gamma", "m1", "K0", "Ku"}) {
        for (const double eps : {0.1, 0.05}) {
            const auto& c = report.cell(eps, name);
            CHECK(c.l2_error >= 0.0);
            CHECK(c.n_used + c.n_degenerate >= 2);
        }
        CHECK(std::isfinite(report.slope(name).slope));
    }
    CHECK(report.replicates.size() == 6);  // mc x |eps|
    for (const auto& row : report.replicates) {
        if (row.degenerate) continue;
        CHECK(row.theta > 0.0);
        CHECK(row.kappa > 0.0);
        CHECK(row.gamma > 0.0);
    }
}

TEST_CASE("estimator studies are reproducible across thread counts", "[experiments]") {
    auto cfg = small_estimator();
    cfg.sim.jobs = 1;
    const auto serial = heston::mc::estimator_error_study(cfg);
    cfg.sim.jobs = 3;
    const auto threaded = heston::mc::estimator_error_study(cfg);
    REQUIRE(serial.replicates.size() == threaded.replicates.size());
    for (std::size_t i = 0; i < serial.replicates.size(); ++i) {
        CHECK(serial.replicates[i].m_hat == threaded.replicates[i].m_hat);
        CHECK(serial.replicates[i].k0 == threaded.replicates[i].k0);
    }
}

TEST_CASE("misaligned estimator grids fail before simulating", "[experiments]") {
    auto cfg = small_estimator();
    cfg.sim.dt = 1e-3;  // eps/J = 0.0025 at eps = 0.05 does not land on the grid
    CHECK_THROWS_AS(heston::mc::estimator_error_study(cfg), heston::error);

    cfg = small_estimator();
    cfg.mc = 1;
    CHECK_THROWS_AS(heston::mc::estimator_error_study(cfg), heston::config_error);

    cfg = small_estimator();
    cfg.lags = {-0.5};
    CHECK_THROWS_AS(heston::mc::estimator_error_study(cfg), heston::config_error);
}
