#include "app_config.hpp"

#include <heston/errors.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

namespace hestvol {

using heston::config_error;
using nlohmann::ordered_json;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

long long steps_of(double t, double dt, const std::string& what) {
    const double q = t / dt;
    const auto n = std::llround(q);
    if (n < 0 || std::fabs(q - static_cast<double>(n)) > 1e-6 * std::max(1.0, std::fabs(q))) {
        throw config_error(what + " = " + num(t) + " is not a multiple of dt = " + num(dt));
    }
    return n;
}

void expect_keys(const ordered_json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw config_error(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (ok.find(item.key()) == ok.end()) {
            throw config_error("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

std::optional<double> opt_number(const ordered_json& j, const char* key,
                                 std::optional<double> base) {
    if (!j.contains(key)) return base;
    if (j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

std::string study_name(study_kind s) {
    switch (s) {
        case study_kind::lq_convergence: return "lq-convergence";
        case study_kind::estimator_convergence: return "estimator-convergence";
        case study_kind::snapshot: return "snapshot";
        case study_kind::analytic_check: return "analytic-check";
    }
    throw heston::domain_error("unreachable study kind");
}

study_kind parse_study(const std::string& name) {
    if (name == "lq-convergence") return study_kind::lq_convergence;
    if (name == "estimator-convergence") return study_kind::estimator_convergence;
    if (name == "snapshot") return study_kind::snapshot;
    if (name == "analytic-check") return study_kind::analytic_check;
    throw config_error("unknown study \"" + name +
                       "\" (expected lq-convergence, estimator-convergence, snapshot or "
                       "analytic-check)");
}

std::string format_name(out_format f) {
    switch (f) {
        case out_format::csv: return "csv";
        case out_format::json: return "json";
        case out_format::both: return "both";
    }
    throw heston::domain_error("unreachable format");
}

out_format parse_format(const std::string& name) {
    if (name == "csv") return out_format::csv;
    if (name == "json") return out_format::json;
    if (name == "both") return out_format::both;
    throw config_error("unknown format \"" + name + "\" (expected csv, json or both)");
}

std::vector<double> app_config::resolved_betas() const {
    if (!beta_grid.empty()) return beta_grid;
    return {model.beta};
}

std::string rule_spec(const heston::rv::j_rule& rule) {
    return rule.label().substr(2);  // strip the "J=" prefix
}

heston::rv::j_rule parse_rule(const std::string& spec) {
    if (spec == "1/eps") return heston::rv::j_rule::inverse();
    if (spec == "1/eps^2") return heston::rv::j_rule::inverse_square();
    std::size_t used = 0;
    long j = 0;
    try {
        j = std::stol(spec, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != spec.size()) {
        throw config_error("bad partition rule \"" + spec +
                           "\" (expected an integer, \"1/eps\" or \"1/eps^2\")");
    }
    return heston::rv::j_rule::constant(j);
}

std::vector<std::string> preset_names() {
    return {"desk-default", "desk-estimator", "paper-9.2", "paper-9.2-beta",
            "paper-9.2-j2", "paper-10", "snapshot-fig1"};
}

bool is_preset(const std::string& name) {
    for (const auto& p : preset_names()) {
        if (p == name) return true;
    }
    return false;
}

app_config preset(const std::string& name) {
    using heston::rv::j_rule;
    app_config c;  // the defaults are the desk-default lq regime
    if (name == "desk-default") return c;
    if (name == "desk-estimator") {
        c.study = study_kind::estimator_convergence;
        c.eps_grid = {0.1, 0.05, 0.02};
        c.j_rules = {j_rule::inverse()};
        c.mc = 200;
        c.dt = 1e-4;
        c.seed = 7;
        return c;
    }
    if (name == "paper-9.2") {
        c.eps_grid = {0.1, 0.05, 0.02, 0.01, 0.005};
        c.n_blocks = 200;
        c.block_size = 1000;
        c.dt = 1e-6;
        return c;
    }
    if (name == "paper-9.2-beta") {
        c = preset("paper-9.2");
        c.j_rules = {j_rule::inverse()};
        c.beta_grid = {0.0, 0.3, 0.7};
        return c;
    }
    if (name == "paper-9.2-j2") {
        c = preset("paper-9.2");
        c.j_rules = {j_rule::inverse_square()};
        c.dt = 1.25e-7;
        return c;
    }
    if (name == "paper-10") {
        c.study = study_kind::estimator_convergence;
        c.eps_grid = {0.1, 0.05, 0.02, 0.01, 0.005};
        c.j_rules = {j_rule::inverse()};
        c.mc = 1000;
        c.dt = 1e-6;
        c.seed = 7;
        return c;
    }
    if (name == "snapshot-fig1") {
        c.study = study_kind::snapshot;
        c.snap_epsilon = 0.01;
        c.snap_delta = 0.005;
        c.j_rules = {j_rule::constant(10), j_rule::constant(40), j_rule::constant(10000)};
        c.dt = 1e-6;
        c.horizon = 1.0;
        c.seed = 11;
        return c;
    }
    throw config_error("unknown preset \"" + name + "\"");
}

app_config apply_json(const ordered_json& doc, app_config base) {
    try {
        expect_keys(doc, "config",
                    {"study", "model", "grids", "lq", "estimator", "snapshot", "sim",
                     "output"});
        if (doc.contains("study")) base.study = parse_study(doc.at("study").get<std::string>());
        if (doc.contains("model")) {
            const auto& m = doc.at("model");
            expect_keys(m, "model", {"kappa", "theta", "gamma", "mu", "beta"});
            if (m.contains("kappa")) base.model.kappa = m.at("kappa").get<double>();
            if (m.contains("theta")) base.model.theta = m.at("theta").get<double>();
            if (m.contains("gamma")) base.model.gamma = m.at("gamma").get<double>();
            if (m.contains("mu")) base.model.mu = m.at("mu").get<double>();
            if (m.contains("beta")) base.model.beta = m.at("beta").get<double>();
        }
        if (doc.contains("grids")) {
            const auto& g = doc.at("grids");
            expect_keys(g, "grids", {"epsilon", "beta", "j_rules"});
            if (g.contains("epsilon")) {
                base.eps_grid = g.at("epsilon").get<std::vector<double>>();
            }
            if (g.contains("beta")) base.beta_grid = g.at("beta").get<std::vector<double>>();
            if (g.contains("j_rules")) {
                std::vector<heston::rv::j_rule> rules;
                for (const auto& r : g.at("j_rules")) {
                    if (r.is_number_integer() || r.is_number_unsigned()) {
                        rules.push_back(heston::rv::j_rule::constant(r.get<long>()));
                    } else {
                        rules.push_back(parse_rule(r.get<std::string>()));
                    }
                }
                base.j_rules = std::move(rules);
            }
        }
        if (doc.contains("lq")) {
            const auto& l = doc.at("lq");
            expect_keys(l, "lq", {"q", "t_eval", "n_blocks", "block_size"});
            if (l.contains("q")) base.q_list = l.at("q").get<std::vector<int>>();
            if (l.contains("t_eval")) base.t_eval = l.at("t_eval").get<double>();
            if (l.contains("n_blocks")) base.n_blocks = l.at("n_blocks").get<long>();
            if (l.contains("block_size")) base.block_size = l.at("block_size").get<long>();
        }
        if (doc.contains("estimator")) {
            const auto& e = doc.at("estimator");
            expect_keys(e, "estimator", {"lags", "mc", "c_n", "delta_override"});
            if (e.contains("lags")) base.lags = e.at("lags").get<std::vector<double>>();
            if (e.contains("mc")) base.mc = e.at("mc").get<long>();
            if (e.contains("c_n")) base.c_n = e.at("c_n").get<double>();
            base.delta_override = opt_number(e, "delta_override", base.delta_override);
        }
        if (doc.contains("snapshot")) {
            const auto& s = doc.at("snapshot");
            expect_keys(s, "snapshot", {"epsilon", "delta_override"});
            if (s.contains("epsilon")) base.snap_epsilon = s.at("epsilon").get<double>();
            base.snap_delta = opt_number(s, "delta_override", base.snap_delta);
        }
        if (doc.contains("sim")) {
            const auto& s = doc.at("sim");
            expect_keys(s, "sim", {"dt", "horizon", "seed", "v0", "r0"});
            if (s.contains("dt")) base.dt = s.at("dt").get<double>();
            if (s.contains("horizon")) base.horizon = s.at("horizon").get<double>();
            if (s.contains("seed")) base.seed = s.at("seed").get<std::uint64_t>();
            base.v0 = opt_number(s, "v0", base.v0);
            if (s.contains("r0")) base.r0 = s.at("r0").get<double>();
        }
        if (doc.contains("output")) {
            const auto& o = doc.at("output");
            expect_keys(o, "output", {"dir", "format", "cache"});
            if (o.contains("dir")) base.out_dir = o.at("dir").get<std::string>();
            if (o.contains("format")) {
                base.format = parse_format(o.at("format").get<std::string>());
            }
            if (o.contains("cache")) base.cache = o.at("cache").get<bool>();
        }
    } catch (const ordered_json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    return base;
}

app_config load_config_file(const std::string& path, app_config base) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw config_error("config " + path + ": " + e.what());
    }
    return apply_json(doc, std::move(base));
}

nlohmann::ordered_json to_json(const app_config& cfg) {
    ordered_json j;
    j["study"] = study_name(cfg.study);
    j["model"] = {{"kappa", cfg.model.kappa},
                  {"theta", cfg.model.theta},
                  {"gamma", cfg.model.gamma},
                  {"mu", cfg.model.mu},
                  {"beta", cfg.model.beta}};
    ordered_json rules = ordered_json::array();
    for (const auto& r : cfg.j_rules) rules.push_back(rule_spec(r));
    j["grids"] = {{"epsilon", cfg.eps_grid}, {"beta", cfg.beta_grid}, {"j_rules", rules}};
    j["lq"] = {{"q", cfg.q_list},
               {"t_eval", cfg.t_eval},
               {"n_blocks", cfg.n_blocks},
               {"block_size", cfg.block_size}};
    j["estimator"] = {{"lags", cfg.lags},
                      {"mc", cfg.mc},
                      {"c_n", cfg.c_n},
                      {"delta_override",
                       cfg.delta_override ? ordered_json(*cfg.delta_override)
                                          : ordered_json(nullptr)}};
    j["snapshot"] = {{"epsilon", cfg.snap_epsilon},
                     {"delta_override",
                      cfg.snap_delta ? ordered_json(*cfg.snap_delta) : ordered_json(nullptr)}};
    j["sim"] = {{"dt", cfg.dt},
                {"horizon", cfg.horizon},
                {"seed", cfg.seed},
                {"v0", cfg.v0 ? ordered_json(*cfg.v0) : ordered_json(nullptr)},
                {"r0", cfg.r0}};
    j["output"] = {{"dir", cfg.out_dir},
                   {"format", format_name(cfg.format)},
                   {"cache", cfg.cache}};
    return j;
}

void validate(const app_config& cfg) {
    for (const double beta : cfg.resolved_betas()) {
        heston::validate_params(cfg.model.kappa, cfg.model.theta, cfg.model.gamma,
                                cfg.model.mu, beta);
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw config_error("dt must be positive");
    if (cfg.out_dir.empty()) throw config_error("output directory must not be empty");
    if (cfg.jobs < 0) throw config_error("jobs must be >= 0");
    if (cfg.v0 && !(*cfg.v0 >= 0.0)) throw config_error("v0 must be nonnegative");

    switch (cfg.study) {
        case study_kind::lq_convergence: {
            if (cfg.eps_grid.empty()) throw config_error("epsilon grid is empty");
            if (cfg.j_rules.empty()) throw config_error("no partition rules given");
            if (cfg.q_list.empty()) throw config_error("no q orders given");
            for (const int q : cfg.q_list) {
                if (q < 1) throw config_error("q orders must be >= 1");
            }
            if (cfg.n_blocks < 2 || cfg.block_size < 2) {
                throw config_error("need n_blocks >= 2 and block_size >= 2");
            }
            if (!(cfg.t_eval > 0.0)) throw config_error("t_eval must be positive");
            const long long steps_t = steps_of(cfg.t_eval, cfg.dt, "t_eval");
            if (steps_t == 0) throw config_error("t_eval must be at least dt");
            for (const double eps : cfg.eps_grid) {
                if (!(eps > 0.0)) throw config_error("epsilon must be positive");
                const long long eps_steps = steps_of(eps, cfg.dt, "epsilon");
                if (eps_steps > steps_t) {
                    throw config_error("window (t-eps, t] starts before time 0 for epsilon = " +
                                       num(eps));
                }
                for (const auto& rule : cfg.j_rules) {
                    const long j = rule.resolve(eps);
                    if (eps_steps % j != 0) {
                        throw config_error("epsilon/J is not a multiple of dt for epsilon = " +
                                           num(eps) + ", " + rule.label());
                    }
                }
            }
            break;
        }
        case study_kind::estimator_convergence: {
            if (cfg.eps_grid.empty()) throw config_error("epsilon grid is empty");
            if (cfg.j_rules.empty()) throw config_error("no partition rules given");
            if (cfg.lags.empty() || !(cfg.lags.front() > 0.0)) {
                throw config_error("the leading lag drives estimation and must be positive");
            }
            if (cfg.mc < 2) throw config_error("need at least two replicates");
            if (!(cfg.c_n > 0.0)) throw config_error("c_n must be positive");
            for (const double eps : cfg.eps_grid) {
                if (!(eps > 0.0)) throw config_error("epsilon must be positive");
                heston::rv::window_scheme ws;
                ws.epsilon = eps;
                ws.j = cfg.j_rules.front();
                ws.c_n = cfg.c_n;
                ws.delta_override = cfg.delta_override;
                const auto rs = heston::rv::resolve_scheme(ws);
                if (steps_of(eps / static_cast<double>(rs.j), cfg.dt, "epsilon/J") == 0) {
                    throw config_error("epsilon/J is finer than dt for epsilon = " + num(eps));
                }
            }
            break;
        }
        case study_kind::snapshot: {
            if (cfg.j_rules.empty()) throw config_error("no partition rules given");
            const double eps = cfg.snap_epsilon;
            if (!(eps > 0.0)) throw config_error("epsilon must be positive");
            if (!(cfg.horizon > eps)) {
                throw config_error("snapshot horizon must exceed epsilon");
            }
            steps_of(cfg.horizon, cfg.dt, "horizon");
            steps_of(eps, cfg.dt, "epsilon");
            const double delta = cfg.snap_delta ? *cfg.snap_delta : std::sqrt(eps);
            if (!(delta > 0.0)) throw config_error("snapshot spacing must be positive");
            if (delta < cfg.dt) throw config_error("snapshot spacing is finer than dt");
            for (const auto& rule : cfg.j_rules) {
                const long j = rule.resolve(eps);
                if (steps_of(eps / static_cast<double>(j), cfg.dt, "epsilon/J") == 0) {
                    throw config_error("epsilon/J is finer than dt for " + rule.label());
                }
            }
            break;
        }
        case study_kind::analytic_check: break;
    }
}

}  // namespace hestvol
