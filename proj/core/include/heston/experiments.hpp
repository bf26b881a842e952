#pragma once

#include <heston/estimators.hpp>
#include <heston/params.hpp>
#include <heston/realized_vol.hpp>
#include <heston/sim.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace heston::mc {

/// Ordinary least squares of log(value) on log(epsilon).
struct slope_fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |log value - fit| over the points
};

slope_fit_result slope_fit(std::span<const std::pair<double, double>> points);

/// One fitted convergence rate in a study report. When at least four grid
/// points exist the fit is restricted to epsilon <= 0.05 (the asymptotic
/// range); `restricted` records whether the cut was applied and `eps_used`
/// lists the points that entered the fit.
struct slope_entry {
    std::string rule;
    std::string quantity;
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    bool restricted = false;
    std::vector<double> eps_used;
};

/// Block aggregation behind lq_error_study: qth_powers holds |Y - V|^q for
/// n_blocks * block_size paths in path order; block k is the k-th consecutive
/// run of block_size entries.
struct block_stats {
    double estimate = 0.0;
    double sigma = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double se = 0.0;
};

block_stats block_statistics(std::span<const double> qth_powers, long n_blocks,
                             long block_size, int q);

// ---------------------------------------------------------------------------
// L^q error study: || Y_t^eps - V_t ||_q over (epsilon, J-rule) grids with
// block confidence intervals.

struct lq_study_config {
    heston_params params;
    std::vector<double> eps_grid;
    std::vector<rv::j_rule> j_rules;
    std::vector<int> q_list{2, 4};
    double t_eval = 1.0;
    long n_blocks = 200;
    long block_size = 1000;
    sim::sim_config sim;  // dt, seed, v0, r0, jobs; n_paths and horizon are derived
};

struct lq_cell {
    double epsilon = 0.0;
    std::string rule;  // label of the partition rule
    long j = 0;        // resolved J
    int q = 0;
    double estimate = 0.0;  // L-hat^q
    double sigma = 0.0;     // std of block estimates (the CI convention used here)
    double ci_low = 0.0;    // estimate -/+ 1.96 sigma
    double ci_high = 0.0;
    double se = 0.0;  // sigma / sqrt(n_blocks), the conventional standard error
};

struct lq_report {
    std::vector<lq_cell> cells;
    std::vector<slope_entry> slopes;
    long n_blocks = 0;
    long block_size = 0;
    double t_eval = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    heston_params params;

    [[nodiscard]] const lq_cell& cell(double epsilon, const std::string& rule, int q) const;
    [[nodiscard]] const slope_entry& slope(const std::string& rule,
                                           const std::string& quantity) const;
};

/// For each block k, l_k = (block mean of |Y - V|^q)^{1/q}; the reported
/// estimate is the mean of the l_k and sigma their standard deviation across
/// blocks. Paths use one RNG stream per global path index, so the report is
/// independent of the thread count.
lq_report lq_error_study(const lq_study_config& cfg);

// ---------------------------------------------------------------------------
// Parameter / moment estimator error study over a shrinking-epsilon sweep.

struct estimator_study_config {
    heston_params params;
    std::vector<double> eps_grid;
    rv::window_scheme scheme;       // template; epsilon is overridden per grid point
    std::vector<double> lags{0.6};  // requested lags; the first drives estimate_params
    long mc = 1000;
    sim::sim_config sim;  // dt, seed, v0, r0, jobs; horizon and n_paths are derived
};

struct replicate_row {
    long replicate = 0;
    double epsilon = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double m_hat = 0.0;
    double k0 = 0.0;
    double ku = 0.0;
    double realized_u = 0.0;
    bool degenerate = false;
};

struct estimator_cell {
    double epsilon = 0.0;
    std::string quantity;  // theta | kappa | gamma | m1 | K0 | Ku
    double lag = 0.0;      // requested lag for Ku rows, 0 otherwise
    double l2_error = 0.0;
    long n_used = 0;
    long n_degenerate = 0;
};

struct estimator_report {
    std::vector<estimator_cell> cells;
    std::vector<slope_entry> slopes;
    std::vector<replicate_row> replicates;
    long mc = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    heston_params params;
    std::vector<double> lags;

    [[nodiscard]] const estimator_cell& cell(double epsilon,
                                             const std::string& quantity) const;
    [[nodiscard]] const slope_entry& slope(const std::string& quantity) const;
};

/// Per epsilon: mc independent trajectories, each yielding one realized-vol
/// series and one parameter estimate; reports Monte Carlo L2 errors of
/// (theta, kappa, gamma) and of the raw moments (m-hat, K-hat(0), K-hat(u)),
/// plus log-log slope fits. Degenerate replicates are counted and excluded
/// from the parameter averages; moment averages use every replicate.
/// Replicate r uses RNG stream r at every epsilon (common random numbers).
estimator_report estimator_error_study(const estimator_study_config& cfg);

}  // namespace heston::mc
