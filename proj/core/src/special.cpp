#include <heston/special.hpp>

#include <heston/errors.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace heston {

namespace {

// Ascending series: I_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_m t_m with
// t_0 = 1, t_{m+1} = t_m * (x^2/4) / ((m+1)(nu+m+1)). Converges for every
// (nu, x); the sum is rescaled on the fly so it cannot overflow.
double log_series(double nu, double x) {
    const double w = 0.25 * x * x;
    double sum = 1.0;
    double term = 1.0;
    double log_scale = 0.0;
    for (int m = 0; m < 100000; ++m) {
        term *= w / ((m + 1.0) * (nu + m + 1.0));
        sum += term;
        if (term < 1e-14 * sum) break;
        if (sum > 1e280) {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::numbers::ln10;
        }
    }
    return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(sum) + log_scale;
}

// Hankel expansion: I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k / x^k,
// a_k = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (8 k!). Truncated at the smallest
// term; only used where that term is far below the target accuracy.
double log_asymptotic(double nu, double x) {
    const double mu4 = 4.0 * nu * nu;
    double sum = 1.0;
    double term = 1.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu4 - odd * odd) / (8.0 * k * x);
        const double mag = std::fabs(term);
        if (mag >= prev_mag) break;  // divergent tail reached
        sum += term;
        prev_mag = mag;
        if (mag < 1e-17 * std::fabs(sum)) break;
    }
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

}  // namespace

double log_bessel_i(double nu, double x) {
    // nu > -1 keeps every Gamma(nu+m+1) in the series positive; orders at or
    // below -1 are not needed by any density here.
    if (nu <= -1.0 || x < 0.0 || !std::isfinite(nu) || !std::isfinite(x)) {
        throw domain_error("log_bessel_i requires nu > -1 and x >= 0");
    }
    if (x == 0.0) {
        if (nu == 0.0) return 0.0;
        return nu > 0.0 ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    }
    // The Hankel expansion needs x well past the turning point before its
    // smallest term is negligible; nu^2 (rather than the 2*nu one might try
    // first) keeps its truncation error under ~1e-9 at every order.
    const double switch_point = std::max(30.0, nu * nu);
    if (x < switch_point) return log_series(nu, x);
    return log_asymptotic(nu, x);
}

}  // namespace heston
