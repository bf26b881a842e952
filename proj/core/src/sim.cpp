#include <heston/sim.hpp>

#include <heston/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heston::sim {

namespace {

std::size_t checked_step_count(double horizon, double dt) {
    if (!(dt > 0.0)) throw config_error("dt must be positive");
    if (!(horizon > 0.0)) throw config_error("horizon must be positive");
    const double ratio = horizon / dt;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    if (n == 0 || std::fabs(n * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
        std::ostringstream msg;
        msg << "horizon " << horizon << " is not an integer number of dt = " << dt
            << " steps";
        throw config_error(msg.str());
    }
    return n;
}

void validate_config(const sim_config& cfg, std::size_t n_steps) {
    if (cfg.n_paths == 0) throw config_error("n_paths must be positive");
    if (cfg.store_stride == 0) throw config_error("store_stride must be positive");
    if (n_steps % cfg.store_stride != 0) {
        throw config_error("store_stride must divide the step count");
    }
    if (cfg.jobs < 1) throw config_error("jobs must be >= 1");
    if (cfg.v0 && !(*cfg.v0 > 0.0)) throw config_error("v0 must be positive");
    const std::size_t samples = n_steps / cfg.store_stride + 1;
    const std::size_t doubles = cfg.n_paths * samples * (cfg.store_variance ? 2 : 1);
    if (doubles > std::size_t{1} << 30) {
        throw config_error("requested path storage exceeds the memory contract; "
                           "increase store_stride or lower n_paths");
    }
}

}  // namespace

path_bundle::path_bundle(const heston_params&, const sim_config& cfg, std::size_t n_samples,
                         std::vector<double> returns, std::vector<double> variances)
    : n_paths_(cfg.n_paths),
      n_samples_(n_samples),
      grid_dt_(cfg.dt * static_cast<double>(cfg.store_stride)),
      sim_dt_(cfg.dt),
      seed_(cfg.seed),
      path_offset_(cfg.path_offset),
      returns_(std::move(returns)),
      variances_(std::move(variances)) {}

std::span<const double> path_bundle::returns(std::size_t path) const {
    if (path >= n_paths_) throw domain_error("path index out of range");
    return {returns_.data() + path * n_samples_, n_samples_};
}

std::span<const double> path_bundle::variances(std::size_t path) const {
    if (path >= n_paths_) throw domain_error("path index out of range");
    if (variances_.empty()) throw domain_error("variances were not stored");
    return {variances_.data() + path * n_samples_, n_samples_};
}

path_generator::path_generator(const heston_params& params, double dt, double v0, double r0,
                               std::uint64_t seed, std::uint64_t path_index)
    : kappa_theta_dt_(params.kappa * params.theta * dt),
      kappa_dt_(params.kappa * dt),
      mu_dt_(params.mu * dt),
      gamma_sqrt_dt_(params.gamma * std::sqrt(dt)),
      sqrt_dt_(std::sqrt(dt)),
      beta_(params.beta),
      beta_comp_(std::sqrt(1.0 - params.beta * params.beta)),
      seed_(seed),
      path_(path_index),
      v_(v0),
      r_(r0) {}

void path_generator::step() {
    const normal_pair g = gaussian_pair(seed_, path_, step_);
    const double eta = beta_ * g.z0 + beta_comp_ * g.z1;
    const double sqrt_v = std::sqrt(v_ < 0.0 ? 0.0 : v_);
    r_ += mu_dt_ + sqrt_v * sqrt_dt_ * g.z0;
    v_ += kappa_theta_dt_ - kappa_dt_ * v_ + gamma_sqrt_dt_ * sqrt_v * eta;
    if (v_ < 0.0) v_ = 0.0;
    ++step_;
}

path_bundle simulate(const heston_params& params, const sim_config& cfg) {
    const std::size_t n_steps = checked_step_count(cfg.horizon, cfg.dt);
    validate_config(cfg, n_steps);
    const std::size_t stride = cfg.store_stride;
    const std::size_t n_samples = n_steps / stride + 1;
    const double v0 = cfg.v0.value_or(params.theta);

    std::vector<double> returns(cfg.n_paths * n_samples);
    std::vector<double> variances(cfg.store_variance ? cfg.n_paths * n_samples : 0);

    parallel_for(cfg.n_paths, cfg.jobs, [&](std::size_t p) {
        path_generator gen(params, cfg.dt, v0, cfg.r0, cfg.seed, cfg.path_offset + p);
        double* row_r = returns.data() + p * n_samples;
        double* row_v = cfg.store_variance ? variances.data() + p * n_samples : nullptr;
        row_r[0] = gen.r();
        if (row_v) row_v[0] = gen.v();
        for (std::size_t s = 1; s < n_samples; ++s) {
            for (std::size_t k = 0; k < stride; ++k) gen.step();
            row_r[s] = gen.r();
            if (row_v) row_v[s] = gen.v();
        }
    });

    return {params, cfg, n_samples, std::move(returns), std::move(variances)};
}

std::vector<std::pair<double, double>> holder_scaling_check(const heston_params& params,
                                                            const sim_config& cfg,
                                                            std::span<const double> h_grid,
                                                            double q) {
    const std::size_t n_steps = checked_step_count(cfg.horizon, cfg.dt);
    if (!(q > 0.0)) throw domain_error("holder_scaling_check requires q > 0");
    if (h_grid.empty()) throw domain_error("h_grid must not be empty");

    std::vector<std::size_t> h_steps(h_grid.size());
    std::size_t h_max = 0;
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        const double h = h_grid[i];
        if (h < 0.0) throw config_error("h values must be nonnegative");
        const auto steps = static_cast<std::size_t>(std::llround(h / cfg.dt));
        if (std::fabs(steps * cfg.dt - h) > 1e-9 * std::max(1.0, h)) {
            throw config_error("every h must be an integer multiple of dt");
        }
        h_steps[i] = steps;
        h_max = std::max(h_max, steps);
    }
    if (h_max >= n_steps) {
        throw config_error("horizon must exceed max(h) to leave a burn-in segment");
    }
    const std::size_t base_step = n_steps - h_max;  // fixed t = horizon - max h
    const double v0 = cfg.v0.value_or(params.theta);

    // per-path |V_{t+h} - V_t|^q, filled independently then reduced in order
    std::vector<double> powers(cfg.n_paths * h_grid.size());
    parallel_for(cfg.n_paths, cfg.jobs, [&](std::size_t p) {
        path_generator gen(params, cfg.dt, v0, cfg.r0, cfg.seed, cfg.path_offset + p);
        while (gen.step_index() < base_step) gen.step();
        const double v_base = gen.v();
        double* row = powers.data() + p * h_grid.size();
        // h_steps need not be sorted; walk the union of offsets in order
        std::vector<std::pair<std::size_t, std::size_t>> order(h_grid.size());
        for (std::size_t i = 0; i < h_grid.size(); ++i) order[i] = {h_steps[i], i};
        std::sort(order.begin(), order.end());
        for (const auto& [offset, idx] : order) {
            while (gen.step_index() < base_step + offset) gen.step();
            row[idx] = std::pow(std::fabs(gen.v() - v_base), q);
        }
    });

    std::vector<std::pair<double, double>> out(h_grid.size());
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        double sum = 0.0;
        for (std::size_t p = 0; p < cfg.n_paths; ++p) sum += powers[p * h_grid.size() + i];
        out[i] = {h_grid[i], std::pow(sum / static_cast<double>(cfg.n_paths), 1.0 / q)};
    }
    return out;
}

}  // namespace heston::sim
