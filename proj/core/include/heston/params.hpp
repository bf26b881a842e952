#pragma once

#include <heston/errors.hpp>

namespace heston {

/// Heston volatility-SDE parameters:
///
///   dR_t = mu dt + sqrt(V_t) dZ_t
///   dV_t = kappa (theta - V_t) dt + gamma sqrt(V_t) dB_t,   E[dZ_t dB_t] = beta dt
///
/// Plain aggregate so test fixtures can build degenerate sets directly;
/// validated construction goes through validate_params().
struct heston_params {
    double kappa = 0.0;  // mean-reversion rate (1/time)
    double theta = 0.0;  // long-run variance level
    double gamma = 0.0;  // volatility of volatility (variance / sqrt(time))
    double mu = 0.0;     // return drift (1/time)
    double beta = 0.0;   // correlation of the two Brownian drivers

    /// 2*kappa*theta/gamma^2; the Feller condition requires this to exceed 1.
    [[nodiscard]] double feller_ratio() const { return 2.0 * kappa * theta / (gamma * gamma); }
};

/// Checks positivity, |beta| < 1 and the strict Feller condition.
/// Throws domain_error or feller_violation; returns the params unchanged on success.
heston_params validate_params(double kappa, double theta, double gamma, double mu, double beta);

/// Constants derived from a parameter set, following the usual CIR notation:
/// r = 2*kappa*theta/gamma^2 - 1, Lambda = 2*kappa/gamma^2, dfr = 2r + 2,
/// nu(T) = exp(-kappa T), lambda(T) = Lambda / (1 - nu(T)).
class derived_constants {
public:
    explicit derived_constants(const heston_params& p);

    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double lambda_cap() const { return lambda_cap_; }  // Lambda
    [[nodiscard]] double dfr() const { return 2.0 * r_ + 2.0; }

    [[nodiscard]] double nu(double t) const;
    /// Defined for t > 0 only; diverges like Lambda/(kappa t) as t -> 0.
    [[nodiscard]] double lambda(double t) const;

private:
    double kappa_;
    double r_;
    double lambda_cap_;
};

/// Stationary moments of the variance process: mean m1 = theta,
/// second moment m2 = theta^2 + theta/Lambda, covariance K(u) = K(0) exp(-kappa u).
class stationary_moments {
public:
    explicit stationary_moments(const heston_params& p);

    [[nodiscard]] double m1() const { return m1_; }
    [[nodiscard]] double m2() const { return m2_; }
    [[nodiscard]] double k0() const { return k0_; }
    /// K(u) for u >= 0.
    [[nodiscard]] double k(double u) const;

private:
    double m1_;
    double m2_;
    double k0_;
    double kappa_;
};

/// Inverse moment map: recovers (kappa, theta, gamma) from the stationary mean m1,
/// the variance K0 and one lagged covariance Ku at lag u:
///   theta = m1, kappa = -(1/u) log(Ku/K0), gamma^2 = 2 K0 kappa / theta.
struct recovered_params {
    double kappa;
    double theta;
    double gamma;
};

recovered_params params_from_moments(double m1, double k0, double ku, double u);

}  // namespace heston
