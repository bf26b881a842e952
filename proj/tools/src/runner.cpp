#include "runner.hpp"

#include "artifacts.hpp"

#include <heston/analytic_checks.hpp>
#include <heston/errors.hpp>
#include <heston/experiments.hpp>
#include <heston/path_io.hpp>
#include <heston/report_io.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace hestvol {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct artifact {
    std::string name;
    std::string content;
};

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string cache_key(const heston::heston_params& p, const heston::sim::sim_config& sc) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "k=%.17g;t=%.17g;g=%.17g;m=%.17g;b=%.17g;dt=%.17g;h=%.17g;n=%zu;"
                  "s=%llu;o=%llu;st=%zu;var=%d;v0=%.17g;r0=%.17g",
                  p.kappa, p.theta, p.gamma, p.mu, p.beta, sc.dt, sc.horizon, sc.n_paths,
                  static_cast<unsigned long long>(sc.seed),
                  static_cast<unsigned long long>(sc.path_offset), sc.store_stride,
                  sc.store_variance ? 1 : 0, sc.v0 ? *sc.v0 : -1.0, sc.r0);
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(buf)));
    return hex;
}

/// Path bundles are the dominant cost of a snapshot; identical (params, sim)
/// requests reuse the dump from a previous run.
heston::sim::path_bundle cached_simulate(const heston::heston_params& p,
                                         const heston::sim::sim_config& sc,
                                         const app_config& cfg, ordered_json& cache_info) {
    if (!cfg.cache) {
        cache_info = {{"enabled", false}};
        return heston::sim::simulate(p, sc);
    }
    const std::string key = cache_key(p, sc);
    const fs::path dir = fs::path(cfg.out_dir) / "cache";
    const fs::path file = dir / (key + ".hstp");
    if (fs::exists(file)) {
        heston::sim::path_bundle bundle = heston::sim::read_path_dump(file);
        if (bundle.has_variance() == sc.store_variance) {
            cache_info = {{"enabled", true}, {"hit", true}, {"file", file.string()}};
            return bundle;
        }
    }
    heston::sim::path_bundle bundle = heston::sim::simulate(p, sc);
    fs::create_directories(dir);
    const fs::path tmp = dir / (key + ".tmp");
    heston::sim::write_path_dump(bundle, tmp);
    std::error_code ec;
    if (sc.store_variance) {
        fs::rename(tmp.string() + ".var", file.string() + ".var", ec);
    }
    if (!ec) fs::rename(tmp, file, ec);
    if (ec) throw heston::io_error("cannot publish cache entry " + file.string());
    cache_info = {{"enabled", true}, {"hit", false}, {"file", file.string()}};
    return bundle;
}

heston::heston_params params_with_beta(const app_config& cfg, double beta) {
    return heston::validate_params(cfg.model.kappa, cfg.model.theta, cfg.model.gamma,
                                   cfg.model.mu, beta);
}

void run_lq(const app_config& cfg, std::vector<artifact>& files, ordered_json& summary) {
    std::vector<heston::mc::lq_report> reports;
    for (const double beta : cfg.resolved_betas()) {
        heston::mc::lq_study_config sc;
        sc.params = params_with_beta(cfg, beta);
        sc.eps_grid = cfg.eps_grid;
        sc.j_rules = cfg.j_rules;
        sc.q_list = cfg.q_list;
        sc.t_eval = cfg.t_eval;
        sc.n_blocks = cfg.n_blocks;
        sc.block_size = cfg.block_size;
        sc.sim.dt = cfg.dt;
        sc.sim.horizon = cfg.t_eval;
        sc.sim.seed = cfg.seed;
        sc.sim.v0 = cfg.v0;
        sc.sim.r0 = cfg.r0;
        sc.sim.jobs = cfg.jobs;
        reports.push_back(heston::mc::lq_error_study(sc));
    }

    if (cfg.format != out_format::json) {
        std::ostringstream cells;
        cells << csv_provenance(cfg);
        heston::io::write_lq_csv(reports, cells);
        files.push_back({"lq_cells.csv", cells.str()});
        std::ostringstream slopes;
        slopes << csv_provenance(cfg);
        heston::io::write_lq_slopes_csv(reports, slopes);
        files.push_back({"lq_slopes.csv", slopes.str()});
    }
    if (cfg.format != out_format::csv) {
        const ordered_json doc = {{"study", "lq-convergence"},
                                  {"config", to_json(cfg)},
                                  {"reports", lq_reports_json(reports)}};
        files.push_back({"lq_report.json", doc.dump(2) + "\n"});
    }

    ordered_json slope_rows = ordered_json::array();
    std::size_t n_cells = 0;
    for (const auto& r : reports) {
        n_cells += r.cells.size();
        for (const auto& s : r.slopes) {
            slope_rows.push_back({{"beta", r.params.beta},
                                  {"rule", s.rule},
                                  {"quantity", s.quantity},
                                  {"slope", s.slope}});
        }
    }
    summary = {{"n_reports", reports.size()}, {"n_cells", n_cells}, {"slopes", slope_rows}};
}

void run_estimator(const app_config& cfg, std::vector<artifact>& files,
                   ordered_json& summary) {
    std::vector<heston::mc::estimator_report> reports;
    for (const double beta : cfg.resolved_betas()) {
        heston::mc::estimator_study_config sc;
        sc.params = params_with_beta(cfg, beta);
        sc.eps_grid = cfg.eps_grid;
        sc.scheme.j = cfg.j_rules.front();
        sc.scheme.c_n = cfg.c_n;
        sc.scheme.delta_override = cfg.delta_override;
        sc.lags = cfg.lags;
        sc.mc = cfg.mc;
        sc.sim.dt = cfg.dt;
        sc.sim.seed = cfg.seed;
        sc.sim.v0 = cfg.v0;
        sc.sim.r0 = cfg.r0;
        sc.sim.jobs = cfg.jobs;
        reports.push_back(heston::mc::estimator_error_study(sc));
    }

    if (cfg.format != out_format::json) {
        std::ostringstream cells;
        cells << csv_provenance(cfg);
        heston::io::write_estimator_csv(reports, cells);
        files.push_back({"estimator_cells.csv", cells.str()});
        std::ostringstream slopes;
        slopes << csv_provenance(cfg);
        heston::io::write_estimator_slopes_csv(reports, slopes);
        files.push_back({"estimator_slopes.csv", slopes.str()});
        std::ostringstream reps;
        reps << csv_provenance(cfg);
        heston::io::write_replicates_csv(reports, reps);
        files.push_back({"estimator_replicates.csv", reps.str()});
    }
    if (cfg.format != out_format::csv) {
        const ordered_json doc = {{"study", "estimator-convergence"},
                                  {"config", to_json(cfg)},
                                  {"reports", estimator_reports_json(reports)}};
        files.push_back({"estimator_report.json", doc.dump(2) + "\n"});
    }

    ordered_json slope_rows = ordered_json::array();
    long n_degenerate = 0;
    for (const auto& r : reports) {
        for (const auto& s : r.slopes) {
            slope_rows.push_back({{"beta", r.params.beta},
                                  {"quantity", s.quantity},
                                  {"slope", s.slope}});
        }
        for (const auto& row : r.replicates) n_degenerate += row.degenerate ? 1 : 0;
    }
    summary = {{"n_reports", reports.size()},
               {"n_degenerate", n_degenerate},
               {"slopes", slope_rows}};
}

void run_snapshot(const app_config& cfg, std::vector<artifact>& files,
                  ordered_json& summary, ordered_json& cache_info) {
    const heston::heston_params p = params_with_beta(cfg, cfg.model.beta);

    heston::sim::sim_config sc;
    sc.dt = cfg.dt;
    sc.horizon = cfg.horizon;
    sc.n_paths = 1;
    sc.seed = cfg.seed;
    sc.v0 = cfg.v0;
    sc.r0 = cfg.r0;
    sc.store_stride = 1;
    sc.store_variance = true;
    sc.jobs = 1;
    const heston::sim::path_bundle bundle = cached_simulate(p, sc, cfg, cache_info);

    const auto returns = bundle.returns(0);
    const auto variances = bundle.variances(0);
    const double eps = cfg.snap_epsilon;
    const double delta = cfg.snap_delta ? *cfg.snap_delta : std::sqrt(eps);
    const auto s_eps = std::llround(eps / cfg.dt);
    const auto s_delta = std::max<long long>(1, std::llround(delta / cfg.dt));
    const auto n_steps = static_cast<long long>(bundle.n_samples()) - 1;
    const long long k0 = (s_eps + s_delta - 1) / s_delta;
    const long long k_max = n_steps / s_delta;
    if (k_max < k0) throw heston::config_error("snapshot grid is empty");

    const double threshold = 3.0 * std::sqrt(heston::stationary_moments(p).k0() * eps);

    std::vector<snapshot_series> series;
    for (const auto& rule : cfg.j_rules) {
        snapshot_series s;
        s.rule = rule_spec(rule);
        s.j = rule.resolve(eps);
        s.threshold = threshold;
        for (long long k = k0; k <= k_max; ++k) {
            const auto idx = static_cast<std::size_t>(k * s_delta);
            const double t = static_cast<double>(k * s_delta) * cfg.dt;
            const double y =
                heston::rv::realized_volatility(returns, cfg.dt, t, eps, s.j);
            const double v = variances[idx];
            s.t.push_back(t);
            s.v.push_back(v);
            s.y.push_back(y);
            const double dev = std::fabs(y - v);
            s.max_abs_dev = std::max(s.max_abs_dev, dev);
            if (dev > threshold) ++s.n_excursions;
        }
        series.push_back(std::move(s));
    }

    ordered_json rule_rows = ordered_json::array();
    for (const auto& s : series) {
        if (cfg.format != out_format::json) {
            files.push_back({"snapshot_" + rule_file_tag(parse_rule(s.rule)) + ".csv",
                             snapshot_csv(s, cfg)});
        }
        rule_rows.push_back({{"rule", s.rule},
                             {"j", s.j},
                             {"max_abs_dev", s.max_abs_dev},
                             {"n_excursions", s.n_excursions}});
    }
    if (cfg.format != out_format::csv) {
        const ordered_json doc = {{"study", "snapshot"},
                                  {"config", to_json(cfg)},
                                  {"series", snapshot_json(series)}};
        files.push_back({"snapshot_report.json", doc.dump(2) + "\n"});
    }
    summary = {{"epsilon", eps},
               {"delta", static_cast<double>(s_delta) * cfg.dt},
               {"threshold", threshold},
               {"rules", rule_rows}};
}

bool run_checks(const app_config& cfg, std::vector<artifact>& files, ordered_json& summary) {
    const heston::heston_params p = params_with_beta(cfg, cfg.model.beta);
    const auto checks = heston::run_analytic_checks(p, cfg.seed);
    const bool all_pass = heston::all_checks_pass(checks);

    if (cfg.format != out_format::json) {
        std::ostringstream csv;
        csv << csv_provenance(cfg);
        heston::io::write_checks_csv(checks, csv);
        files.push_back({"analytic_checks.csv", csv.str()});
    }
    if (cfg.format != out_format::csv) {
        const ordered_json doc = {{"study", "analytic-check"},
                                  {"config", to_json(cfg)},
                                  {"checks", checks_json(checks)}};
        files.push_back({"analytic_checks.json", doc.dump(2) + "\n"});
    }

    long n_passed = 0;
    for (const auto& c : checks) n_passed += c.pass ? 1 : 0;
    summary = {{"feller_ratio", p.feller_ratio()},
               {"n_checks", checks.size()},
               {"n_passed", n_passed},
               {"all_pass", all_pass}};
    return all_pass;
}

}  // namespace

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_study(const app_config& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = utc_now();

    std::vector<artifact> files;
    ordered_json summary;
    ordered_json cache_info;
    bool checks_ok = true;

    switch (cfg.study) {
        case study_kind::lq_convergence: run_lq(cfg, files, summary); break;
        case study_kind::estimator_convergence: run_estimator(cfg, files, summary); break;
        case study_kind::snapshot: run_snapshot(cfg, files, summary, cache_info); break;
        case study_kind::analytic_check: checks_ok = run_checks(cfg, files, summary); break;
    }

    fs::create_directories(cfg.out_dir);
    ordered_json outputs = ordered_json::array();
    for (const artifact& a : files) {
        write_atomic(fs::path(cfg.out_dir) / a.name, a.content);
        outputs.push_back({{"file", a.name}, {"bytes", a.content.size()}});
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ordered_json manifest = {{"tool", "hestvol"},
                             {"version", HESTVOL_VERSION},
                             {"study", study_name(cfg.study)},
                             {"status", checks_ok ? "ok" : "check-failed"},
                             {"started_utc", started},
                             {"wall_seconds", wall},
                             {"seed", cfg.seed},
                             {"jobs", cfg.jobs},
                             {"format", format_name(cfg.format)},
                             {"config", to_json(cfg)},
                             {"outputs", std::move(outputs)},
                             {"summary", std::move(summary)}};
    if (!cache_info.is_null()) manifest["cache"] = std::move(cache_info);
    write_atomic(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return checks_ok ? 0 : 3;
}

}  // namespace hestvol
