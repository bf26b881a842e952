#include <heston/analytic_checks.hpp>

#include <heston/densities.hpp>
#include <heston/moments.hpp>
#include <heston/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace heston {

namespace {

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

// Integration cut for Gamma-tailed variance densities: safely past the mean
// plus twelve standard deviations, widened for higher moments.
double upper_cut(const heston_params& p, double y, int q) {
    const stationary_moments sm(p);
    const double spread = 12.0 * std::sqrt(sm.k0()) * std::max(1.0, std::sqrt(double(q)));
    return std::max(y, sm.m1()) + spread;
}

}  // namespace

std::vector<check_result> run_analytic_checks(const heston_params& p, std::uint64_t seed,
                                              int n_pairs) {
    std::vector<check_result> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw_y(0.5, 8.0);
    std::uniform_real_distribution<double> draw_t(0.1, 2.0);
    std::uniform_real_distribution<double> draw_u(0.1, 2.0);

    out.push_back({"feller_ratio", p.feller_ratio(), 0.0, p.feller_ratio() > 1.0});

    {  // moment map round trip over random lags
        const stationary_moments sm(p);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double u = draw_u(rng);
            const recovered_params r = params_from_moments(sm.m1(), sm.k0(), sm.k(u), u);
            worst = std::max({worst, rel_err(r.kappa, p.kappa), rel_err(r.theta, p.theta),
                              rel_err(r.gamma, p.gamma)});
        }
        out.push_back({"moment_map_round_trip", worst, 1e-12, worst <= 1e-12});
    }

    {  // general-q moments agree with the dedicated closed forms
        double worst1 = 0.0;
        double worst2 = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double y = draw_y(rng);
            const double t = draw_t(rng);
            worst1 = std::max(worst1, rel_err(conditional_moment_q(p, y, t, 1),
                                              conditional_mean(p, y, t)));
            worst2 = std::max(worst2, rel_err(conditional_moment_q(p, y, t, 2),
                                              conditional_second_moment(p, y, t)));
        }
        out.push_back({"closed_form_q1", worst1, 1e-12, worst1 <= 1e-12});
        out.push_back({"closed_form_q2", worst2, 1e-12, worst2 <= 1e-12});
    }

    {  // conditional decay identity |M1(y,T) - theta| = nu_T |y - theta|
        const derived_constants d(p);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double y = draw_y(rng);
            const double t = draw_t(rng);
            const double lhs = std::fabs(conditional_mean(p, y, t) - p.theta);
            const double rhs = d.nu(t) * std::fabs(y - p.theta);
            worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, rhs));
        }
        out.push_back({"conditional_decay", worst, 1e-12, worst <= 1e-12});
    }

    {  // transition-density quadrature moments, orders 1..4
        double worst = 0.0;
        for (int i = 0; i < n_pairs; ++i) {
            const double y = draw_y(rng);
            const double t = draw_t(rng);
            for (int q = 1; q <= 4; ++q) {
                const quad_result quad = integrate(
                    [&](double z) {
                        return z <= 0.0 ? 0.0
                                        : std::pow(z, q) * transition_density(p, z, y, t);
                    },
                    0.0, upper_cut(p, y, q), 1e-10, 1e-11);
                worst = std::max(worst, rel_err(quad.value, conditional_moment_q(p, y, t, q)));
            }
        }
        out.push_back({"transition_quadrature_moments", worst, 1e-6, worst <= 1e-6});
    }

    {  // transition density normalizes to 1
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double y = draw_y(rng);
            const double t = draw_t(rng);
            const quad_result quad = integrate(
                [&](double z) { return z <= 0.0 ? 0.0 : transition_density(p, z, y, t); },
                0.0, upper_cut(p, y, 1), 1e-10, 1e-11);
            worst = std::max(worst, std::fabs(quad.value - 1.0));
        }
        out.push_back({"transition_normalization", worst, 1e-6, worst <= 1e-6});
    }

    {  // noncentral chi-squared moments vs quadrature, q <= 6
        std::uniform_real_distribution<double> draw_dfr(0.5, 12.0);
        std::uniform_real_distribution<double> draw_ncp(0.0, 15.0);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double dfr = draw_dfr(rng);
            const double ncp = draw_ncp(rng);
            for (int q = 1; q <= 6; ++q) {
                // the integrand x^q f(x) follows the x^q-weighted law, mean near
                // dfr + 2q + ncp with a scale-2 exponential tail; cut for that one
                const double hi = dfr + 2.0 * q + ncp +
                                  16.0 * std::sqrt(2.0 * (dfr + 2.0 * q + 2.0 * ncp)) + 160.0;
                const quad_result quad = integrate(
                    [&](double x) {
                        if (x <= 0.0) return 0.0;
                        return std::exp(q * std::log(x) + log_ncchi2_density(x, dfr, ncp));
                    },
                    0.0, hi, 1e-10, 1e-11);
                worst = std::max(worst, rel_err(quad.value, ncchi2_moment(q, dfr, ncp)));
            }
        }
        out.push_back({"ncchi2_quadrature_moments", worst, 1e-8, worst <= 1e-8});
    }

    {  // rescaled transition law is noncentral chi-squared (dfr = 2r+2, ncp = 2 lam y nu)
        const derived_constants d(p);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double y = draw_y(rng);
            const double t = draw_t(rng);
            const double two_lam = 2.0 * d.lambda(t);
            const double ncp = two_lam * y * d.nu(t);
            const double z = draw_y(rng);
            // densities transform as p_V(z) = 2 lambda_T f_chi2(2 lambda_T z)
            const double lhs = log_transition_density(p, z, y, t);
            const double rhs =
                std::log(two_lam) + log_ncchi2_density(two_lam * z, d.dfr(), ncp);
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        out.push_back({"transition_is_rescaled_ncchi2", worst, 1e-10, worst <= 1e-10});
    }

    {  // central moments follow the product formula dfr(dfr+2)...(dfr+2q-2)
        double worst = 0.0;
        for (double dfr : {0.5, 1.0, 3.0, 6.8, 11.5}) {
            double product = 1.0;
            for (int q = 1; q <= 6; ++q) {
                product *= dfr + 2.0 * (q - 1);
                worst = std::max(worst, rel_err(ncchi2_moment(q, dfr, 0.0), product));
            }
        }
        out.push_back({"central_chi2_product", worst, 1e-13, worst <= 1e-13});
    }

    {  // stationary density: normalization, mean, second moment, mode
        const stationary_moments sm(p);
        const derived_constants d(p);
        const double hi = upper_cut(p, sm.m1(), 2);
        const quad_result norm = integrate(
            [&](double z) { return z <= 0.0 ? 0.0 : stationary_density(p, z); }, 0.0, hi,
            1e-12, 1e-12);
        const quad_result mean = integrate(
            [&](double z) { return z <= 0.0 ? 0.0 : z * stationary_density(p, z); }, 0.0, hi,
            1e-12, 1e-12);
        const quad_result second = integrate(
            [&](double z) { return z <= 0.0 ? 0.0 : z * z * stationary_density(p, z); }, 0.0,
            hi, 1e-12, 1e-12);
        const double e_norm = std::fabs(norm.value - 1.0);
        const double e_mean = rel_err(mean.value, sm.m1());
        const double e_second = rel_err(second.value, sm.m2());
        out.push_back({"stationary_normalization", e_norm, 1e-8, e_norm <= 1e-8});
        out.push_back({"stationary_mean", e_mean, 1e-8, e_mean <= 1e-8});
        out.push_back({"stationary_second_moment", e_second, 1e-8, e_second <= 1e-8});

        const double mode = d.r() / d.lambda_cap();
        const bool is_mode =
            stationary_density(p, mode) > stationary_density(p, mode * (1.0 + 1e-4)) &&
            stationary_density(p, mode) > stationary_density(p, mode * (1.0 - 1e-4));
        out.push_back({"stationary_mode_at_r_over_lambda", mode, 0.0, is_mode});
    }

    return out;
}

bool all_checks_pass(const std::vector<check_result>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const check_result& c) { return c.pass; });
}

}  // namespace heston
