#include <heston/densities.hpp>
#include <heston/estimators.hpp>
#include <heston/moments.hpp>
#include <heston/params.hpp>
#include <heston/quadrature.hpp>
#include <heston/realized_vol.hpp>
#include <heston/rng.hpp>
#include <heston/sim.hpp>
#include <heston/special.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

const heston::heston_params params = heston::validate_params(1.7, 4.0, 2.0, 0.05, 0.0);

void bm_philox_gaussian(benchmark::State& state) {
    std::uint64_t step = 0;
    for (auto _ : state) {
        const auto z = heston::sim::gaussian_pair(42, 0, step++);
        benchmark::DoNotOptimize(z.z0 + z.z1);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_philox_gaussian);

void bm_euler_steps(benchmark::State& state) {
    heston::sim::path_generator gen(params, 1e-5, 4.0, 0.0, 42, 0);
    for (auto _ : state) {
        gen.step();
        benchmark::DoNotOptimize(gen.v());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_euler_steps);

void bm_simulate_path(benchmark::State& state) {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 1.0;
    cfg.n_paths = 1;
    cfg.seed = 42;
    for (auto _ : state) {
        const auto bundle = heston::sim::simulate(params, cfg);
        benchmark::DoNotOptimize(bundle.returns(0).back());
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_simulate_path);

void bm_log_bessel_small(benchmark::State& state) {
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heston::log_bessel_i(2.4, x));
        x = x < 25.0 ? x + 0.01 : 0.5;
    }
}
BENCHMARK(bm_log_bessel_small);

void bm_log_bessel_asymptotic(benchmark::State& state) {
    double x = 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heston::log_bessel_i(2.4, x));
        x = x < 500.0 ? x + 0.5 : 50.0;
    }
}
BENCHMARK(bm_log_bessel_asymptotic);

void bm_transition_density(benchmark::State& state) {
    double z = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heston::transition_density(params, z, 4.0, 1.0));
        z = z < 12.0 ? z + 0.05 : 0.5;
    }
}
BENCHMARK(bm_transition_density);

void bm_ncchi2_moment_q6(benchmark::State& state) {
    double ncp = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heston::ncchi2_moment(6, 6.8, ncp));
        ncp = ncp < 15.0 ? ncp + 0.1 : 1.0;
    }
}
BENCHMARK(bm_ncchi2_moment_q6);

void bm_conditional_moment_quadrature(benchmark::State& state) {
    for (auto _ : state) {
        const auto quad = heston::integrate(
            [&](double z) {
                return z <= 0.0 ? 0.0
                                : z * z * heston::transition_density(params, z, 4.0, 1.0);
            },
            0.0, 60.0, 1e-10, 1e-11);
        benchmark::DoNotOptimize(quad.value);
    }
}
BENCHMARK(bm_conditional_moment_quadrature);

void bm_realized_series(benchmark::State& state) {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 40.0;
    cfg.n_paths = 1;
    cfg.seed = 42;
    const auto bundle = heston::sim::simulate(params, cfg);
    heston::rv::window_scheme ws;
    ws.epsilon = 0.1;
    ws.c_n = 10.0;
    for (auto _ : state) {
        const auto series = heston::rv::make_realized_series(bundle, 0, ws);
        benchmark::DoNotOptimize(series.w.back());
    }
}
BENCHMARK(bm_realized_series);

void bm_empirical_moments(benchmark::State& state) {
    heston::rv::realized_series series;
    series.epsilon = 0.01;
    series.delta = 0.1;
    series.j = 100;
    series.k0 = 1;
    series.n = 100000;
    series.w.resize(100000);
    std::uint64_t s = 0;
    for (auto& w : series.w) {
        const auto z = heston::sim::gaussian_pair(1, 0, s++);
        w = 4.0 + z.z0;
    }
    const std::vector<double> lags{0.6};
    for (auto _ : state) {
        const auto m = heston::est::empirical_moments(series, lags);
        benchmark::DoNotOptimize(m.m_hat);
    }
    state.SetItemsProcessed(state.iterations() * series.n);
}
BENCHMARK(bm_empirical_moments);

}  // namespace

BENCHMARK_MAIN();
