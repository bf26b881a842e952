#include <heston/estimators.hpp>

#include <heston/errors.hpp>

#include <cmath>
#include <string>

namespace heston::est {

long lag_index(double u, double delta) {
    if (u < 0.0 || !std::isfinite(u)) throw domain_error("lag must be nonnegative");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw domain_error("observation spacing must be positive");
    }
    return static_cast<long>(std::floor(u / delta + 0.5));
}

const lag_estimate& moment_estimates::at(double u) const {
    for (const lag_estimate& e : k_hat) {
        if (e.u == u) return e;
    }
    throw domain_error("lag " + std::to_string(u) + " was not estimated");
}

moment_estimates empirical_moments(const rv::realized_series& series,
                                   std::span<const double> lags) {
    const std::vector<double>& w = series.w;
    const auto n = static_cast<long>(w.size());
    if (n < 1) throw insufficient_data("empty realized series");

    moment_estimates out;
    out.n_used = w.size();
    out.delta = series.delta;
    out.epsilon = series.epsilon;
    out.j = series.j;

    double sum = 0.0;
    for (const double x : w) sum += x;
    out.m_hat = sum / static_cast<double>(n);

    out.k_hat.reserve(lags.size());
    for (const double u : lags) {
        const long big_u = lag_index(u, series.delta);
        if (big_u >= n) {
            throw insufficient_data("lag index " + std::to_string(big_u) +
                                    " leaves no pairs in a series of " + std::to_string(n) +
                                    " observations");
        }
        double cross = 0.0;
        for (long k = 0; k + big_u < n; ++k) cross += w[k] * w[k + big_u];
        const double value =
            cross / static_cast<double>(n - big_u) - out.m_hat * out.m_hat;
        out.k_hat.push_back(
            {u, big_u, static_cast<double>(big_u) * series.delta, value});
    }
    return out;
}

param_estimate estimate_params(const moment_estimates& moments, double u) {
    const lag_estimate& base = moments.at(0.0);
    const lag_estimate& lag = moments.at(u);

    param_estimate out;
    out.lag_u = lag.realized;
    out.k0 = base.value;
    out.ku = lag.value;

    if (!(moments.m_hat > 0.0)) throw estimation_degenerate("empirical mean m-hat <= 0");
    if (!(out.k0 > 0.0)) throw estimation_degenerate("empirical variance K-hat(0) <= 0");
    if (!(out.ku > 0.0)) throw estimation_degenerate("lagged moment K-hat(u) <= 0");
    if (out.ku >= out.k0) {
        throw estimation_degenerate("K-hat(u) >= K-hat(0): implied kappa <= 0");
    }
    if (!(out.lag_u > 0.0)) throw estimation_degenerate("realized lag U*delta is zero");

    const recovered_params rec =
        params_from_moments(moments.m_hat, out.k0, out.ku, out.lag_u);
    out.theta_hat = rec.theta;
    out.kappa_hat = rec.kappa;
    out.gamma_hat = rec.gamma;
    return out;
}

lag_quality lag_quality_check(const param_estimate& estimate) {
    lag_quality q;
    q.decay = std::exp(-estimate.kappa_hat * estimate.lag_u);
    q.acceptable = q.decay >= 0.3 && q.decay <= 0.7;
    return q;
}

}  // namespace heston::est
