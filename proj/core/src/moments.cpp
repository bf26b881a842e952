#include <heston/moments.hpp>

#include <cmath>
#include <vector>

namespace heston {

double ncchi2_moment(int q, double dfr, double ncp) {
    if (q < 0) throw domain_error("ncchi2_moment requires q >= 0");
    if (dfr <= 0.0) throw domain_error("ncchi2_moment requires dfr > 0");
    if (ncp < 0.0) throw domain_error("ncchi2_moment requires ncp >= 0");
    if (q == 0) return 1.0;

    // cumulants c_n = 2^{n-1} (n-1)! (dfr + n ncp)
    std::vector<double> cum(static_cast<std::size_t>(q) + 1, 0.0);
    double factorial = 1.0;  // (n-1)!
    for (int n = 1; n <= q; ++n) {
        cum[n] = std::ldexp(factorial * (dfr + n * ncp), n - 1);
        factorial *= n;
    }

    // raw moments: m_n = sum_{j=0}^{n-1} C(n-1, j) c_{j+1} m_{n-1-j}
    std::vector<double> mom(static_cast<std::size_t>(q) + 1, 0.0);
    mom[0] = 1.0;
    for (int n = 1; n <= q; ++n) {
        double sum = 0.0;
        double binom = 1.0;  // C(n-1, j)
        for (int j = 0; j < n; ++j) {
            sum += binom * cum[j + 1] * mom[n - 1 - j];
            binom *= static_cast<double>(n - 1 - j) / (j + 1);
        }
        mom[n] = sum;
    }
    if (!std::isfinite(mom[q])) {
        throw overflow_error("ncchi2_moment overflows double range");
    }
    return mom[q];
}

double conditional_mean(const heston_params& p, double y, double t) {
    if (y < 0.0) throw domain_error("conditional_mean requires y >= 0");
    if (t < 0.0) throw domain_error("conditional_mean requires T >= 0");
    const double nu = std::exp(-p.kappa * t);
    return (1.0 - nu) * p.theta + nu * y;
}

double conditional_second_moment(const heston_params& p, double y, double t) {
    if (y < 0.0) throw domain_error("conditional_second_moment requires y >= 0");
    if (t < 0.0) throw domain_error("conditional_second_moment requires T >= 0");
    const derived_constants d(p);
    const double nu = d.nu(t);
    const double b = p.theta + 1.0 / d.lambda_cap();
    return y * y * nu * nu + 2.0 * y * nu * (1.0 - nu) * b +
           (1.0 - nu) * (1.0 - nu) * p.theta * b;
}

double conditional_moment_q(const heston_params& p, double y, double t, int q) {
    if (q < 1) throw domain_error("conditional_moment_q requires q >= 1");
    if (y < 0.0) throw domain_error("conditional_moment_q requires y >= 0");
    if (t <= 0.0) throw domain_error("conditional_moment_q requires T > 0");
    const derived_constants d(p);
    const double two_lambda = 2.0 * d.lambda(t);
    const double ncp = two_lambda * y * d.nu(t);
    const double pi_q = ncchi2_moment(q, d.dfr(), ncp);
    const double value = pi_q * std::pow(two_lambda, -q);
    if (!std::isfinite(value)) {
        throw overflow_error("conditional_moment_q overflows double range");
    }
    return value;
}

}  // namespace heston
