#include <heston/params.hpp>

#include <cmath>
#include <sstream>

namespace heston {

heston_params validate_params(double kappa, double theta, double gamma, double mu, double beta) {
    if (!std::isfinite(kappa) || !std::isfinite(theta) || !std::isfinite(gamma) ||
        !std::isfinite(mu) || !std::isfinite(beta)) {
        throw domain_error("heston params must be finite");
    }
    if (kappa <= 0.0) throw domain_error("kappa must be positive");
    if (theta <= 0.0) throw domain_error("theta must be positive");
    if (gamma <= 0.0) throw domain_error("gamma must be positive");
    if (beta <= -1.0 || beta >= 1.0) throw domain_error("beta must lie in (-1, 1)");

    heston_params p{kappa, theta, gamma, mu, beta};
    if (p.feller_ratio() <= 1.0) {
        std::ostringstream msg;
        msg << "Feller condition violated: 2*kappa*theta/gamma^2 = " << p.feller_ratio()
            << " must exceed 1";
        throw feller_violation(msg.str());
    }
    return p;
}

derived_constants::derived_constants(const heston_params& p)
    : kappa_(p.kappa),
      r_(2.0 * p.kappa * p.theta / (p.gamma * p.gamma) - 1.0),
      lambda_cap_(2.0 * p.kappa / (p.gamma * p.gamma)) {}

double derived_constants::nu(double t) const {
    if (t < 0.0) throw domain_error("nu(t) requires t >= 0");
    return std::exp(-kappa_ * t);
}

double derived_constants::lambda(double t) const {
    if (t <= 0.0) throw domain_error("lambda(t) requires t > 0");
    // 1 - exp(-kappa t) via expm1 to keep small-t evaluations accurate
    return lambda_cap_ / (-std::expm1(-kappa_ * t));
}

stationary_moments::stationary_moments(const heston_params& p)
    : m1_(p.theta),
      m2_(p.theta * p.theta + p.theta * p.gamma * p.gamma / (2.0 * p.kappa)),
      k0_(p.theta * p.gamma * p.gamma / (2.0 * p.kappa)),
      kappa_(p.kappa) {}

double stationary_moments::k(double u) const {
    if (u < 0.0) throw domain_error("K(u) requires u >= 0");
    return k0_ * std::exp(-kappa_ * u);
}

recovered_params params_from_moments(double m1, double k0, double ku, double u) {
    if (u <= 0.0) throw domain_error("params_from_moments requires lag u > 0");
    if (m1 <= 0.0) throw domain_error("params_from_moments requires m1 > 0");
    if (k0 <= 0.0) throw domain_error("params_from_moments requires K(0) > 0");
    if (ku <= 0.0 || ku >= k0) {
        throw domain_error("params_from_moments requires 0 < K(u) < K(0)");
    }
    const double kappa = -std::log(ku / k0) / u;
    const double theta = m1;
    const double gamma = std::sqrt(2.0 * k0 * kappa / theta);
    return {kappa, theta, gamma};
}

}  // namespace heston
