#pragma once

#include <heston/params.hpp>

namespace heston {

/// Raw moment E[X^q] of the noncentral chi-squared distribution with dfr
/// degrees of freedom and noncentrality ncp. Computed from the cumulants
/// c_n = 2^{n-1} (n-1)! (dfr + n ncp) through the standard moment-from-cumulant
/// recurrence; all terms are positive, so the recurrence is stable.
/// q = 0 returns 1. Throws overflow_error when the moment leaves double range.
double ncchi2_moment(int q, double dfr, double ncp);

/// Conditional mean of the variance process:
/// M_1(y, T) = (1 - nu_T) theta + nu_T y.
double conditional_mean(const heston_params& p, double y, double t);

/// Conditional second moment:
/// M_2(y, T) = y^2 nu_T^2 + 2 y nu_T (1 - nu_T)(theta + 1/Lambda)
///            + (1 - nu_T)^2 theta (theta + 1/Lambda).
double conditional_second_moment(const heston_params& p, double y, double t);

/// Conditional moment of arbitrary integer order q >= 1:
/// M_q(y, T) = (2 lambda_T)^{-q} pi_q(2 lambda_T y nu_T), with pi_q the raw
/// noncentral chi-squared moment at dfr = 2r + 2. Agrees with the closed forms
/// above for q = 1, 2.
double conditional_moment_q(const heston_params& p, double y, double t, int q);

}  // namespace heston
