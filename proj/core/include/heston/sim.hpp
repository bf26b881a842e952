#pragma once

#include <heston/params.hpp>
#include <heston/rng.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace heston::sim {

/// Euler simulation settings. horizon/dt must be an integer step count, and
/// store_stride must divide it; both are enforced when a simulation starts.
struct sim_config {
    double dt = 1e-4;
    double horizon = 1.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    std::optional<double> v0;     // initial variance; defaults to theta
    double r0 = 0.0;              // initial return level
    std::uint64_t path_offset = 0;  // first path index (RNG stream id)
    std::size_t store_stride = 1;   // keep every stride-th grid point
    bool store_variance = false;
    int jobs = 1;
};

/// Simulated trajectories on the decimated grid (0, s*dt, 2*s*dt, ..., horizon)
/// with s = store_stride. Returns are always stored; variances on request.
/// Immutable after construction and safe to share across threads.
class path_bundle {
public:
    path_bundle(const heston_params& params, const sim_config& cfg, std::size_t n_samples,
                std::vector<double> returns, std::vector<double> variances);

    [[nodiscard]] std::size_t n_paths() const { return n_paths_; }
    [[nodiscard]] std::size_t n_samples() const { return n_samples_; }
    [[nodiscard]] double grid_dt() const { return grid_dt_; }
    [[nodiscard]] double horizon() const { return grid_dt_ * (n_samples_ - 1); }
    [[nodiscard]] bool has_variance() const { return !variances_.empty(); }

    [[nodiscard]] std::span<const double> returns(std::size_t path) const;
    [[nodiscard]] std::span<const double> variances(std::size_t path) const;
    [[nodiscard]] double time_at(std::size_t sample) const { return grid_dt_ * sample; }

    // provenance
    [[nodiscard]] double sim_dt() const { return sim_dt_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t path_offset() const { return path_offset_; }

private:
    std::size_t n_paths_;
    std::size_t n_samples_;
    double grid_dt_;
    double sim_dt_;
    std::uint64_t seed_;
    std::uint64_t path_offset_;
    std::vector<double> returns_;    // row-major [path][sample]
    std::vector<double> variances_;  // same layout when stored
};

/// Streams one path of the joint (V, R) Euler scheme step by step. The
/// variance uses full truncation: drift and diffusion evaluate sqrt(max(V,0))
/// and the updated state is clamped at zero, so stored variances never go
/// negative. One Philox block is consumed per step.
class path_generator {
public:
    path_generator(const heston_params& params, double dt, double v0, double r0,
                   std::uint64_t seed, std::uint64_t path_index);

    void step();

    [[nodiscard]] double v() const { return v_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] std::uint64_t step_index() const { return step_; }

private:
    double kappa_theta_dt_;
    double kappa_dt_;
    double mu_dt_;
    double gamma_sqrt_dt_;
    double sqrt_dt_;
    double beta_;
    double beta_comp_;  // sqrt(1 - beta^2)
    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t step_ = 0;
    double v_;
    double r_;
};

/// Simulates cfg.n_paths independent trajectories. Bit-identical output for
/// identical (params, cfg) at any jobs setting: every path owns the RNG stream
/// keyed by its global path index.
path_bundle simulate(const heston_params& params, const sim_config& cfg);

/// Monte Carlo estimate of the L^q norm ||V_{t+h} - V_t||_q at a fixed t past
/// burn-in (t = horizon - max h), for each h in h_grid. Every h must be a
/// nonnegative integer multiple of dt. Default q = 2 matches the Holder
/// scaling bound; q = 4 exercises the same harness at fourth order.
std::vector<std::pair<double, double>> holder_scaling_check(const heston_params& params,
                                                            const sim_config& cfg,
                                                            std::span<const double> h_grid,
                                                            double q = 2.0);

}  // namespace heston::sim
