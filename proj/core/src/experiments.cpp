#include <heston/experiments.hpp>

#include <heston/errors.hpp>
#include <heston/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace heston::mc {

namespace {

double ipow(double x, int q) {
    double out = 1.0;
    for (int i = 0; i < q; ++i) out *= x;
    return out;
}

bool close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::uint64_t checked_steps(double t, double dt, const char* what) {
    const double q = t / dt;
    const auto n = static_cast<std::uint64_t>(std::llround(q));
    if (std::abs(q - static_cast<double>(n)) > 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s = %.17g is not a multiple of dt = %.17g", what,
                      t, dt);
        throw config_error(buf);
    }
    return n;
}

slope_entry fit_with_cut(std::string rule, std::string quantity,
                         const std::vector<std::pair<double, double>>& pts) {
    std::vector<std::pair<double, double>> use = pts;
    bool restricted = false;
    if (pts.size() >= 4) {
        std::vector<std::pair<double, double>> small;
        for (const auto& p : pts) {
            if (p.first <= 0.05 * (1.0 + 1e-12)) small.push_back(p);
        }
        if (small.size() >= 2) {
            use = std::move(small);
            restricted = true;
        }
    }
    const slope_fit_result fit = slope_fit(use);
    slope_entry entry;
    entry.rule = std::move(rule);
    entry.quantity = std::move(quantity);
    entry.slope = fit.slope;
    entry.intercept = fit.intercept;
    entry.max_residual = fit.max_residual;
    entry.restricted = restricted;
    entry.eps_used.reserve(use.size());
    for (const auto& p : use) entry.eps_used.push_back(p.first);
    return entry;
}

}  // namespace

slope_fit_result slope_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw domain_error("slope fit needs at least two points");
    std::vector<double> lx(points.size());
    std::vector<double> ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [eps, value] = points[i];
        if (!(eps > 0.0) || !(value > 0.0)) {
            throw domain_error("slope fit needs positive epsilon and values");
        }
        lx[i] = std::log(eps);
        ly[i] = std::log(value);
    }

    bool flat = true;
    for (const double y : ly) {
        if (y != ly[0]) {
            flat = false;
            break;
        }
    }
    if (flat) return {0.0, ly[0], 0.0};

    const auto n = static_cast<double>(points.size());
    double xbar = 0.0;
    double ybar = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        xbar += lx[i];
        ybar += ly[i];
    }
    xbar /= n;
    ybar /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (lx[i] - xbar) * (lx[i] - xbar);
        sxy += (lx[i] - xbar) * (ly[i] - ybar);
    }
    if (sxx == 0.0) {
        throw domain_error("slope fit needs at least two distinct epsilon values");
    }

    slope_fit_result fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    for (std::size_t i = 0; i < points.size(); ++i) {
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ly[i] - fit.intercept - fit.slope * lx[i]));
    }
    return fit;
}

const lq_cell& lq_report::cell(double epsilon, const std::string& rule, int q) const {
    for (const lq_cell& c : cells) {
        if (c.q == q && c.rule == rule && close(c.epsilon, epsilon)) return c;
    }
    throw domain_error("no cell for epsilon=" + std::to_string(epsilon) + ", " + rule +
                       ", q=" + std::to_string(q));
}

const slope_entry& lq_report::slope(const std::string& rule,
                                    const std::string& quantity) const {
    for (const slope_entry& s : slopes) {
        if (s.rule == rule && s.quantity == quantity) return s;
    }
    throw domain_error("no slope fitted for " + rule + ", " + quantity);
}

block_stats block_statistics(std::span<const double> qth_powers, long n_blocks,
                             long block_size, int q) {
    if (n_blocks < 2 || block_size < 1) {
        throw domain_error("block statistics need n_blocks >= 2 and block_size >= 1");
    }
    if (q < 1) throw domain_error("q must be >= 1");
    const auto kb = static_cast<std::size_t>(n_blocks);
    const auto bs = static_cast<std::size_t>(block_size);
    if (qth_powers.size() != kb * bs) {
        throw domain_error("power array size does not match n_blocks * block_size");
    }

    std::vector<double> block_l(kb);
    for (std::size_t b = 0; b < kb; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < bs; ++i) acc += qth_powers[b * bs + i];
        block_l[b] = std::pow(acc / static_cast<double>(bs), 1.0 / q);
    }

    double mean = 0.0;
    for (const double v : block_l) mean += v;
    mean /= static_cast<double>(kb);
    double var = 0.0;
    for (const double v : block_l) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(kb));

    block_stats out;
    out.estimate = mean;
    out.sigma = sigma;
    out.ci_low = mean - 1.96 * sigma;
    out.ci_high = mean + 1.96 * sigma;
    out.se = sigma / std::sqrt(static_cast<double>(kb));
    return out;
}

namespace {

struct lq_combo {
    std::size_t eps_idx = 0;
    std::size_t rule_idx = 0;
    double epsilon = 0.0;
    long j = 0;
    std::uint64_t start = 0;
    std::uint64_t stride = 0;
    std::vector<std::uint32_t> pos;  // boundary indices into the unique event list
};

}  // namespace

lq_report lq_error_study(const lq_study_config& cfg) {
    const heston_params params = validate_params(cfg.params.kappa, cfg.params.theta,
                                                 cfg.params.gamma, cfg.params.mu,
                                                 cfg.params.beta);
    if (cfg.eps_grid.empty()) throw config_error("epsilon grid is empty");
    if (cfg.j_rules.empty()) throw config_error("no partition rules given");
    if (cfg.q_list.empty()) throw config_error("no q orders given");
    for (const int q : cfg.q_list) {
        if (q < 1) throw config_error("q orders must be >= 1");
    }
    if (cfg.n_blocks < 2 || cfg.block_size < 2) {
        throw config_error("need n_blocks >= 2 and block_size >= 2");
    }
    const double dt = cfg.sim.dt;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("dt must be positive");
    if (!(cfg.t_eval > 0.0)) throw config_error("t_eval must be positive");
    if (cfg.t_eval > cfg.sim.horizon * (1.0 + 1e-12)) {
        throw config_error("t_eval exceeds the configured horizon");
    }
    const std::uint64_t steps_t = checked_steps(cfg.t_eval, dt, "t_eval");
    if (steps_t == 0) throw config_error("t_eval must be at least dt");

    std::vector<lq_combo> combos;
    std::vector<std::uint64_t> events;
    for (std::size_t ei = 0; ei < cfg.eps_grid.size(); ++ei) {
        const double eps = cfg.eps_grid[ei];
        if (!(eps > 0.0)) throw config_error("epsilon must be positive");
        const std::uint64_t eps_steps = checked_steps(eps, dt, "epsilon");
        if (eps_steps > steps_t) {
            throw config_error("window (t-eps, t] starts before time 0 for epsilon = " +
                               std::to_string(eps));
        }
        for (std::size_t ri = 0; ri < cfg.j_rules.size(); ++ri) {
            const long j = cfg.j_rules[ri].resolve(eps);
            if (eps_steps % static_cast<std::uint64_t>(j) != 0) {
                throw config_error("epsilon/J is not a multiple of dt for epsilon = " +
                                   std::to_string(eps) + ", " + cfg.j_rules[ri].label());
            }
            lq_combo c;
            c.eps_idx = ei;
            c.rule_idx = ri;
            c.epsilon = eps;
            c.j = j;
            c.stride = eps_steps / static_cast<std::uint64_t>(j);
            c.start = steps_t - eps_steps;
            for (long i = 0; i <= j; ++i) {
                events.push_back(c.start + static_cast<std::uint64_t>(i) * c.stride);
            }
            combos.push_back(std::move(c));
        }
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    for (lq_combo& c : combos) {
        c.pos.resize(static_cast<std::size_t>(c.j) + 1);
        for (long i = 0; i <= c.j; ++i) {
            const std::uint64_t s = c.start + static_cast<std::uint64_t>(i) * c.stride;
            const auto it = std::lower_bound(events.begin(), events.end(), s);
            c.pos[static_cast<std::size_t>(i)] =
                static_cast<std::uint32_t>(it - events.begin());
        }
    }

    const std::size_t n_paths =
        static_cast<std::size_t>(cfg.n_blocks) * static_cast<std::size_t>(cfg.block_size);
    const std::size_t n_c = combos.size();
    const std::size_t n_q = cfg.q_list.size();
    const double v0 = cfg.sim.v0.value_or(params.theta);

    // |Y - V|^q per (path, combo, q); each path writes only its own slots and
    // the reduction below walks paths in order, so any thread count gives
    // bit-identical results.
    std::vector<double> pows(n_paths * n_c * n_q);
    parallel_for(n_paths, cfg.sim.jobs, [&](std::size_t p) {
        sim::path_generator gen(params, dt, v0, cfg.sim.r0, cfg.sim.seed,
                                cfg.sim.path_offset + p);
        std::vector<double> rec(events.size());
        std::size_t ev = 0;
        if (events[0] == 0) rec[ev++] = gen.r();
        while (gen.step_index() < steps_t) {
            gen.step();
            if (ev < events.size() && events[ev] == gen.step_index()) rec[ev++] = gen.r();
        }
        const double v_end = gen.v();
        double* out = pows.data() + p * n_c * n_q;
        for (std::size_t ci = 0; ci < n_c; ++ci) {
            const lq_combo& c = combos[ci];
            double y = 0.0;
            for (long i = 1; i <= c.j; ++i) {
                const double d = rec[c.pos[static_cast<std::size_t>(i)]] -
                                 rec[c.pos[static_cast<std::size_t>(i) - 1]];
                y += d * d;
            }
            y /= c.epsilon;
            const double err = std::abs(y - v_end);
            for (std::size_t qi = 0; qi < n_q; ++qi) {
                out[ci * n_q + qi] = ipow(err, cfg.q_list[qi]);
            }
        }
    });

    lq_report report;
    report.n_blocks = cfg.n_blocks;
    report.block_size = cfg.block_size;
    report.t_eval = cfg.t_eval;
    report.dt = dt;
    report.seed = cfg.sim.seed;
    report.params = params;

    std::vector<double> gathered(n_paths);
    for (std::size_t ci = 0; ci < n_c; ++ci) {
        for (std::size_t qi = 0; qi < n_q; ++qi) {
            for (std::size_t p = 0; p < n_paths; ++p) {
                gathered[p] = pows[(p * n_c + ci) * n_q + qi];
            }
            const block_stats stats =
                block_statistics(gathered, cfg.n_blocks, cfg.block_size, cfg.q_list[qi]);
            lq_cell cell;
            cell.epsilon = combos[ci].epsilon;
            cell.rule = cfg.j_rules[combos[ci].rule_idx].label();
            cell.j = combos[ci].j;
            cell.q = cfg.q_list[qi];
            cell.estimate = stats.estimate;
            cell.sigma = stats.sigma;
            cell.ci_low = stats.ci_low;
            cell.ci_high = stats.ci_high;
            cell.se = stats.se;
            report.cells.push_back(std::move(cell));
        }
    }

    for (std::size_t ri = 0; ri < cfg.j_rules.size(); ++ri) {
        for (std::size_t qi = 0; qi < n_q; ++qi) {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t ci = 0; ci < n_c; ++ci) {
                if (combos[ci].rule_idx != ri) continue;
                pts.emplace_back(combos[ci].epsilon,
                                 report.cells[ci * n_q + qi].estimate);
            }
            if (pts.size() < 2) continue;
            report.slopes.push_back(fit_with_cut(cfg.j_rules[ri].label(),
                                                 "L" + std::to_string(cfg.q_list[qi]),
                                                 pts));
        }
    }
    return report;
}

const estimator_cell& estimator_report::cell(double epsilon,
                                             const std::string& quantity) const {
    for (const estimator_cell& c : cells) {
        if (c.quantity == quantity && close(c.epsilon, epsilon)) return c;
    }
    throw domain_error("no cell for epsilon=" + std::to_string(epsilon) + ", " + quantity);
}

const slope_entry& estimator_report::slope(const std::string& quantity) const {
    for (const slope_entry& s : slopes) {
        if (s.quantity == quantity) return s;
    }
    throw domain_error("no slope fitted for " + quantity);
}

estimator_report estimator_error_study(const estimator_study_config& cfg) {
    const heston_params params = validate_params(cfg.params.kappa, cfg.params.theta,
                                                 cfg.params.gamma, cfg.params.mu,
                                                 cfg.params.beta);
    if (cfg.eps_grid.empty()) throw config_error("epsilon grid is empty");
    if (cfg.lags.empty()) throw config_error("need at least one requested lag");
    if (!(cfg.lags.front() > 0.0)) {
        throw config_error("the leading lag drives estimation and must be positive");
    }
    if (cfg.mc < 2) throw config_error("need at least two replicates");
    const double dt = cfg.sim.dt;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("dt must be positive");

    const stationary_moments truth(params);
    const double u_main = cfg.lags.front();

    std::vector<double> lag_list;
    lag_list.push_back(0.0);
    for (const double u : cfg.lags) {
        if (u != 0.0) lag_list.push_back(u);
    }

    estimator_report report;
    report.mc = cfg.mc;
    report.dt = dt;
    report.seed = cfg.sim.seed;
    report.params = params;
    report.lags = cfg.lags;

    struct rep_result {
        double theta = 0.0;
        double kappa = 0.0;
        double gamma = 0.0;
        double m_hat = 0.0;
        double k0 = 0.0;
        double realized_u = 0.0;
        std::vector<double> ku;
        bool degenerate = false;
    };

    // resolve every grid point up front so a misaligned cell fails before any
    // simulation has run
    struct eps_plan {
        rv::window_scheme scheme;
        rv::resolved_scheme rs;
        std::uint64_t sub_steps = 0;
        double grid_dt = 0.0;
        std::int64_t s_delta = 1;
        double horizon = 0.0;
    };
    std::vector<eps_plan> plans;
    plans.reserve(cfg.eps_grid.size());
    for (const double eps : cfg.eps_grid) {
        eps_plan pl;
        pl.scheme = cfg.scheme;
        pl.scheme.epsilon = eps;
        pl.rs = rv::resolve_scheme(pl.scheme);
        pl.sub_steps =
            checked_steps(eps / static_cast<double>(pl.rs.j), dt, "epsilon/J");
        if (pl.sub_steps == 0) throw config_error("epsilon/J is finer than dt");
        pl.grid_dt = static_cast<double>(pl.sub_steps) * dt;
        pl.s_delta = std::max<std::int64_t>(1, std::llround(pl.rs.delta / pl.grid_dt));
        pl.horizon = static_cast<double>(pl.rs.n * pl.s_delta) * pl.grid_dt;
        plans.push_back(pl);
    }

    const auto mc_count = static_cast<std::size_t>(cfg.mc);
    for (std::size_t ei = 0; ei < cfg.eps_grid.size(); ++ei) {
        const double eps = cfg.eps_grid[ei];
        const rv::window_scheme& scheme = plans[ei].scheme;
        const std::uint64_t sub_steps = plans[ei].sub_steps;
        const double grid_dt = plans[ei].grid_dt;
        const std::int64_t s_delta = plans[ei].s_delta;
        const double horizon = plans[ei].horizon;

        std::vector<rep_result> results(mc_count);
        parallel_for(mc_count, cfg.sim.jobs, [&](std::size_t r) {
            sim::sim_config sc = cfg.sim;
            sc.horizon = horizon;
            sc.n_paths = 1;
            sc.path_offset = cfg.sim.path_offset + r;
            sc.store_stride = sub_steps;
            sc.store_variance = false;
            sc.jobs = 1;
            const sim::path_bundle bundle = sim::simulate(params, sc);
            const rv::realized_series series = rv::make_realized_series(bundle, 0, scheme);
            const est::moment_estimates m = est::empirical_moments(series, lag_list);

            rep_result& out = results[r];
            out.m_hat = m.m_hat;
            out.k0 = m.at(0.0).value;
            out.ku.reserve(cfg.lags.size());
            for (const double u : cfg.lags) out.ku.push_back(m.at(u).value);
            out.realized_u = m.at(u_main).realized;
            try {
                const est::param_estimate pe = est::estimate_params(m, u_main);
                out.theta = pe.theta_hat;
                out.kappa = pe.kappa_hat;
                out.gamma = pe.gamma_hat;
            } catch (const estimation_degenerate&) {
                out.degenerate = true;
                constexpr double nan = std::numeric_limits<double>::quiet_NaN();
                out.theta = nan;
                out.kappa = nan;
                out.gamma = nan;
            }
        });

        // realized lags and true moment values are replicate-independent
        std::vector<double> truth_ku(cfg.lags.size());
        std::vector<double> real_u(cfg.lags.size());
        const double delta_snap = static_cast<double>(s_delta) * grid_dt;
        for (std::size_t i = 0; i < cfg.lags.size(); ++i) {
            real_u[i] = static_cast<double>(est::lag_index(cfg.lags[i], delta_snap)) *
                        delta_snap;
            truth_ku[i] = real_u[i] > 0.0 ? truth.k(real_u[i]) : truth.k0();
        }

        long n_deg = 0;
        double acc_th = 0.0;
        double acc_ka = 0.0;
        double acc_ga = 0.0;
        double acc_m = 0.0;
        double acc_k0 = 0.0;
        std::vector<double> acc_ku(cfg.lags.size(), 0.0);
        for (std::size_t r = 0; r < mc_count; ++r) {
            const rep_result& res = results[r];
            const double dm = res.m_hat - truth.m1();
            const double dk0 = res.k0 - truth.k0();
            acc_m += dm * dm;
            acc_k0 += dk0 * dk0;
            for (std::size_t i = 0; i < cfg.lags.size(); ++i) {
                const double d = res.ku[i] - truth_ku[i];
                acc_ku[i] += d * d;
            }
            report.replicates.push_back({static_cast<long>(r), eps, res.theta, res.kappa,
                                         res.gamma, res.m_hat, res.k0,
                                         res.ku.empty() ? 0.0 : res.ku.front(),
                                         res.realized_u, res.degenerate});
            if (res.degenerate) {
                ++n_deg;
                continue;
            }
            const double dth = res.theta - params.theta;
            const double dka = res.kappa - params.kappa;
            const double dga = res.gamma - params.gamma;
            acc_th += dth * dth;
            acc_ka += dka * dka;
            acc_ga += dga * dga;
        }
        const long n_ok = cfg.mc - n_deg;
        if (n_ok == 0) {
            throw estimation_degenerate("every replicate degenerate at epsilon = " +
                                        std::to_string(eps));
        }

        const auto ok = static_cast<double>(n_ok);
        const auto all = static_cast<double>(cfg.mc);
        report.cells.push_back({eps, "theta", 0.0, std::sqrt(acc_th / ok), n_ok, n_deg});
        report.cells.push_back({eps, "kappa", 0.0, std::sqrt(acc_ka / ok), n_ok, n_deg});
        report.cells.push_back({eps, "gamma", 0.0, std::sqrt(acc_ga / ok), n_ok, n_deg});
        report.cells.push_back({eps, "m1", 0.0, std::sqrt(acc_m / all), cfg.mc, n_deg});
        report.cells.push_back({eps, "K0", 0.0, std::sqrt(acc_k0 / all), cfg.mc, n_deg});
        for (std::size_t i = 0; i < cfg.lags.size(); ++i) {
            report.cells.push_back(
                {eps, "Ku", cfg.lags[i], std::sqrt(acc_ku[i] / all), cfg.mc, n_deg});
        }
    }

    const std::string rule = cfg.scheme.j.label();
    const char* names[] = {"theta", "kappa", "gamma", "m1", "K0", "Ku"};
    for (const char* name : names) {
        std::vector<std::pair<double, double>> pts;
        for (const double eps : cfg.eps_grid) {
            pts.emplace_back(eps, report.cell(eps, name).l2_error);
        }
        if (pts.size() < 2) continue;
        report.slopes.push_back(fit_with_cut(rule, name, pts));
    }
    return report;
}

}  // namespace heston::mc
