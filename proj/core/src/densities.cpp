#include <heston/densities.hpp>

#include <heston/special.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace heston {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_transition_density(const heston_params& p, double z, double y, double t) {
    if (z < 0.0) throw domain_error("transition_density requires z >= 0");
    if (y <= 0.0) throw domain_error("transition_density requires y > 0");
    if (t <= 0.0) throw domain_error("transition_density requires T > 0");
    if (z == 0.0) return kNegInf;

    const derived_constants d(p);
    const double lam = d.lambda(t);
    const double nu = d.nu(t);
    const double ynu = y * nu;
    return std::log(lam) + 0.5 * d.r() * (std::log(z) - std::log(ynu)) -
           lam * (z + ynu) + log_bessel_i(d.r(), 2.0 * lam * std::sqrt(z * ynu));
}

double transition_density(const heston_params& p, double z, double y, double t) {
    const double lp = log_transition_density(p, z, y, t);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double log_stationary_density(const heston_params& p, double z) {
    if (z < 0.0) throw domain_error("stationary_density requires z >= 0");
    if (z == 0.0) return kNegInf;
    const derived_constants d(p);
    const double lam = d.lambda_cap();
    return std::log(lam) + d.r() * std::log(lam * z) - lam * z - std::lgamma(d.r() + 1.0);
}

double stationary_density(const heston_params& p, double z) {
    const double lp = log_stationary_density(p, z);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double log_ncchi2_density(double x, double dfr, double ncp) {
    if (x < 0.0) throw domain_error("ncchi2 density requires x >= 0");
    if (dfr <= 0.0) throw domain_error("ncchi2 density requires dfr > 0");
    if (ncp < 0.0) throw domain_error("ncchi2 density requires ncp >= 0");
    if (x == 0.0) return kNegInf;
    const double half = dfr / 2.0;
    if (ncp == 0.0) {
        // central chi-squared
        return (half - 1.0) * std::log(x) - 0.5 * x - half * std::numbers::ln2 -
               std::lgamma(half);
    }
    return -std::numbers::ln2 - 0.5 * (x + ncp) + (0.5 * half - 0.5) * std::log(x / ncp) +
           log_bessel_i(half - 1.0, std::sqrt(ncp * x));
}

}  // namespace heston
