#pragma once

#include <heston/params.hpp>
#include <heston/realized_vol.hpp>

#include <span>
#include <vector>

namespace heston::est {

/// Closest integer to u/delta, ties rounding up; guarantees |u - U*delta| <= delta.
long lag_index(double u, double delta);

struct lag_estimate {
    double u = 0.0;        // requested lag
    long index = 0;        // U = lag_index(u, delta)
    double realized = 0.0; // U * delta
    double value = 0.0;    // K-hat at the realized lag
};

struct moment_estimates {
    double m_hat = 0.0;
    std::vector<lag_estimate> k_hat;
    std::size_t n_used = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    long j = 0;

    /// Entry for a requested lag; throws domain_error if the lag was not estimated.
    [[nodiscard]] const lag_estimate& at(double u) const;
};

/// m-hat = (1/N) sum W_k and, per requested lag u,
/// K-hat(u) = -m-hat^2 + (1/(N-U)) sum_k W_k W_{k+U} with U = lag_index(u, delta).
moment_estimates empirical_moments(const rv::realized_series& series,
                                   std::span<const double> lags);

struct param_estimate {
    double theta_hat = 0.0;
    double kappa_hat = 0.0;
    double gamma_hat = 0.0;
    double lag_u = 0.0;  // realized lag U*delta used in the kappa formula
    double k0 = 0.0;     // K-hat(0)
    double ku = 0.0;     // K-hat(lag_u)

    [[nodiscard]] double ratio() const { return ku / k0; }
};

/// Moment inversion: theta-hat = m-hat, kappa-hat = -(1/u) log(K-hat(u)/K-hat(0)),
/// gamma-hat^2 = 2 K-hat(0) kappa-hat / theta-hat, with u the realized lag.
/// Degenerate inputs (K-hat(u) <= 0, K-hat(u) >= K-hat(0), m-hat <= 0) throw
/// estimation_degenerate; values are never clamped.
param_estimate estimate_params(const moment_estimates& moments, double u);

struct lag_quality {
    double decay = 0.0;  // exp(-kappa_hat * lag_u)
    bool acceptable = false;
};

/// Diagnostic from the lag-selection rule: the fitted decay exp(-kappa_hat u)
/// should land in [0.3, 0.7] for a well-conditioned kappa estimate.
lag_quality lag_quality_check(const param_estimate& estimate);

}  // namespace heston::est
