#pragma once

namespace heston {

/// log of the modified Bessel function of the first kind I_nu(x), nu > -1, x >= 0.
///
/// Small and moderate arguments use the ascending power series accumulated in
/// scaled arithmetic (all terms positive, no cancellation); large arguments use
/// the Hankel asymptotic expansion truncated at its smallest term. Relative
/// accuracy is ~1e-14 on the series branch and better than 1e-9 on the
/// asymptotic branch, which is ample for density oracles. The fractional
/// negative orders cover chi-squared densities with fewer than two degrees of
/// freedom.
///
/// At x = 0: 0 for nu = 0, -inf for nu > 0, +inf for nu < 0. Throws
/// domain_error for nu <= -1 or x < 0.
double log_bessel_i(double nu, double x);

}  // namespace heston
