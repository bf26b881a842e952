#include <heston/errors.hpp>
#include <heston/params.hpp>
#include <heston/sim.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using Catch::Approx;

namespace {

const heston::heston_params base = heston::validate_params(1.7, 4.0, 2.0, 0.05, 0.0);

heston::sim::sim_config quick_config() {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 0.5;
    cfg.n_paths = 4;
    cfg.seed = 42;
    cfg.store_variance = true;
    return cfg;
}

}  // namespace

TEST_CASE("simulation output is independent of the thread count", "[sim]") {
    auto cfg = quick_config();
    cfg.n_paths = 16;
    cfg.jobs = 1;
    const auto serial = heston::sim::simulate(base, cfg);
    cfg.jobs = 5;
    const auto threaded = heston::sim::simulate(base, cfg);
    REQUIRE(serial.n_paths() == threaded.n_paths());
    for (std::size_t p = 0; p < serial.n_paths(); ++p) {
        const auto a = serial.returns(p);
        const auto b = threaded.returns(p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i] == b[i]);  // bitwise, not approximate
        }
        const auto va = serial.variances(p);
        const auto vb = threaded.variances(p);
        for (std::size_t i = 0; i < va.size(); ++i) REQUIRE(va[i] == vb[i]);
    }
}

TEST_CASE("each path owns a stream keyed by its global index", "[sim]") {
    auto cfg = quick_config();
    cfg.n_paths = 3;
    const auto all = heston::sim::simulate(base, cfg);

    auto shifted = cfg;
    shifted.n_paths = 1;
    shifted.path_offset = 2;
    const auto tail = heston::sim::simulate(base, shifted);

    const auto a = all.returns(2);
    const auto b = tail.returns(0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("full truncation keeps every stored variance nonnegative", "[sim]") {
    // small theta and a fat gamma drive V against zero constantly
    const auto p = heston::validate_params(2.0, 0.2, 0.85, 0.0, 0.0);
    heston::sim::sim_config cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 5.0;
    cfg.n_paths = 8;
    cfg.seed = 9;
    cfg.v0 = 0.01;
    cfg.store_variance = true;
    const auto bundle = heston::sim::simulate(p, cfg);
    double v_min = 1e300;
    for (std::size_t path = 0; path < bundle.n_paths(); ++path) {
        for (const double v : bundle.variances(path)) v_min = std::min(v_min, v);
    }
    CHECK(v_min >= 0.0);
    CHECK(v_min < 0.05);  // the guard actually engaged
}

TEST_CASE("store_stride decimates without changing the kept samples", "[sim]") {
    auto cfg = quick_config();
    cfg.n_paths = 2;
    const auto full = heston::sim::simulate(base, cfg);

    auto strided = cfg;
    strided.store_stride = 25;
    const auto thin = heston::sim::simulate(base, strided);

    REQUIRE(thin.n_samples() == full.n_samples() / 25 + 1);
    CHECK(thin.grid_dt() == Approx(25e-3).epsilon(1e-15));
    for (std::size_t path = 0; path < 2; ++path) {
        for (std::size_t i = 0; i < thin.n_samples(); ++i) {
            REQUIRE(thin.returns(path)[i] == full.returns(path)[25 * i]);
            REQUIRE(thin.variances(path)[i] == full.variances(path)[25 * i]);
        }
    }
}

TEST_CASE("the streaming generator and the bundle walk the same trajectory", "[sim]") {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.n_paths = 1;
    cfg.seed = 77;
    cfg.v0 = 4.0;
    cfg.store_variance = true;
    const auto bundle = heston::sim::simulate(base, cfg);

    heston::sim::path_generator gen(base, cfg.dt, 4.0, 0.0, 77, 0);
    for (std::size_t i = 1; i < bundle.n_samples(); ++i) {
        gen.step();
        REQUIRE(gen.r() == bundle.returns(0)[i]);
        REQUIRE(gen.v() == bundle.variances(0)[i]);
    }
    CHECK(gen.step_index() == bundle.n_samples() - 1);
}

TEST_CASE("misaligned simulation configs are rejected up front", "[sim]") {
    auto cfg = quick_config();
    cfg.horizon = 0.5004;  // 500.4 steps at dt = 1e-3
    CHECK_THROWS_AS(heston::sim::simulate(base, cfg), heston::config_error);

    cfg = quick_config();
    cfg.store_stride = 7;  // 500 steps, 7 does not divide
    CHECK_THROWS_AS(heston::sim::simulate(base, cfg), heston::config_error);

    cfg = quick_config();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(heston::sim::simulate(base, cfg), heston::config_error);

    cfg = quick_config();
    cfg.n_paths = 0;
    CHECK_THROWS_AS(heston::sim::simulate(base, cfg), heston::config_error);
}

TEST_CASE("long-run sample mean of V approaches theta", "[sim]") {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 30.0;
    cfg.n_paths = 64;
    cfg.seed = 4;
    cfg.store_variance = true;
    cfg.store_stride = 100;
    const auto bundle = heston::sim::simulate(base, cfg);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t path = 0; path < bundle.n_paths(); ++path) {
        const auto v = bundle.variances(path);
        // skip a burn-in third
        for (std::size_t i = v.size() / 3; i < v.size(); ++i) {
            acc += v[i];
            ++count;
        }
    }
    CHECK(acc / static_cast<double>(count) == Approx(4.0).margin(0.35));
}

TEST_CASE("holder scaling of V increments is near square root in h", "[sim]") {
    heston::sim::sim_config cfg;
    cfg.dt = 1.0 / 1024.0;
    cfg.horizon = 2.0;
    cfg.n_paths = 600;
    cfg.seed = 10;
    const std::vector<double> h_grid{1.0 / 256.0, 1.0 / 64.0, 1.0 / 16.0};
    const auto norms = heston::sim::holder_scaling_check(base, cfg, h_grid, 2.0);
    REQUIRE(norms.size() == 3);
    for (std::size_t i = 0; i < norms.size(); ++i) {
        CHECK(norms[i].first == Approx(h_grid[i]));
        CHECK(norms[i].second > 0.0);
        if (i > 0) CHECK(norms[i].second > norms[i - 1].second);
    }
    const double slope = std::log(norms[2].second / norms[0].second) /
                         std::log(h_grid[2] / h_grid[0]);
    CHECK(slope > 0.3);
    CHECK(slope < 0.7);
}
