#pragma once

#include <heston/params.hpp>

namespace heston {

/// log of the variance transition density p(z | V_0 = y) after time T:
///   p(z, y) = lambda_T (z / (y nu_T))^{r/2} exp(-lambda_T (z + y nu_T))
///             I_r(2 lambda_T sqrt(z y nu_T)).
/// Composed entirely in log-space; -inf at z = 0.
double log_transition_density(const heston_params& p, double z, double y, double t);

/// exp of the above; deep tails underflow to exact 0.
double transition_density(const heston_params& p, double z, double y, double t);

/// log of the stationary (Gamma) density psi(z) = Lambda (Lambda z)^r
/// exp(-Lambda z) / Gamma(r+1); -inf at z = 0.
double log_stationary_density(const heston_params& p, double z);

double stationary_density(const heston_params& p, double z);

/// log density of the noncentral chi-squared law (dfr, ncp) at x > 0.
/// The rescaled variance 2 lambda_T V_T follows this law with dfr = 2r + 2 and
/// ncp = 2 lambda_T y nu_T, which ties the transition density to ncchi2_moment.
double log_ncchi2_density(double x, double dfr, double ncp);

}  // namespace heston
