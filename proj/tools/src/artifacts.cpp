#include "artifacts.hpp"

#include <heston/errors.hpp>
#include <heston/report_io.hpp>

#include <fstream>
#include <sstream>
#include <utility>

namespace hestvol {

using nlohmann::ordered_json;

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw heston::io_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw heston::io_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw heston::io_error("cannot rename " + tmp.string() + " to " + path.string() +
                               ": " + ec.message());
    }
}

std::string csv_provenance(const app_config& cfg) {
    return "# config: " + to_json(cfg).dump() + "\n";
}

namespace {

ordered_json params_json(const heston::heston_params& p) {
    return {{"kappa", p.kappa},
            {"theta", p.theta},
            {"gamma", p.gamma},
            {"mu", p.mu},
            {"beta", p.beta}};
}

ordered_json slopes_json(const std::vector<heston::mc::slope_entry>& slopes) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : slopes) {
        arr.push_back({{"rule", s.rule},
                       {"quantity", s.quantity},
                       {"slope", s.slope},
                       {"intercept", s.intercept},
                       {"max_residual", s.max_residual},
                       {"restricted", s.restricted},
                       {"eps_used", s.eps_used}});
    }
    return arr;
}

}  // namespace

ordered_json lq_reports_json(std::span<const heston::mc::lq_report> reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json cells = ordered_json::array();
        for (const auto& c : r.cells) {
            cells.push_back({{"epsilon", c.epsilon},
                             {"rule", c.rule},
                             {"j", c.j},
                             {"q", c.q},
                             {"estimate", c.estimate},
                             {"sigma", c.sigma},
                             {"ci_low", c.ci_low},
                             {"ci_high", c.ci_high},
                             {"se", c.se}});
        }
        arr.push_back({{"params", params_json(r.params)},
                       {"n_blocks", r.n_blocks},
                       {"block_size", r.block_size},
                       {"t_eval", r.t_eval},
                       {"dt", r.dt},
                       {"seed", r.seed},
                       {"cells", std::move(cells)},
                       {"slopes", slopes_json(r.slopes)}});
    }
    return arr;
}

ordered_json estimator_reports_json(std::span<const heston::mc::estimator_report> reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json cells = ordered_json::array();
        for (const auto& c : r.cells) {
            cells.push_back({{"epsilon", c.epsilon},
                             {"quantity", c.quantity},
                             {"lag", c.lag},
                             {"l2_error", c.l2_error},
                             {"n_used", c.n_used},
                             {"n_degenerate", c.n_degenerate}});
        }
        ordered_json reps = ordered_json::array();
        for (const auto& row : r.replicates) {
            reps.push_back({{"replicate", row.replicate},
                            {"epsilon", row.epsilon},
                            {"theta_hat", row.theta},
                            {"kappa_hat", row.kappa},
                            {"gamma_hat", row.gamma},
                            {"m_hat", row.m_hat},
                            {"k0", row.k0},
                            {"ku", row.ku},
                            {"realized_u", row.realized_u},
                            {"degenerate", row.degenerate}});
        }
        arr.push_back({{"params", params_json(r.params)},
                       {"mc", r.mc},
                       {"dt", r.dt},
                       {"seed", r.seed},
                       {"lags", r.lags},
                       {"cells", std::move(cells)},
                       {"slopes", slopes_json(r.slopes)},
                       {"replicates", std::move(reps)}});
    }
    return arr;
}

ordered_json checks_json(std::span<const heston::check_result> checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"observed", c.observed},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    }
    return arr;
}

ordered_json snapshot_json(std::span<const snapshot_series> series) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : series) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            rows.push_back({s.t[i], s.v[i], s.y[i]});
        }
        arr.push_back({{"rule", s.rule},
                       {"j", s.j},
                       {"max_abs_dev", s.max_abs_dev},
                       {"threshold", s.threshold},
                       {"n_excursions", s.n_excursions},
                       {"rows", std::move(rows)}});
    }
    return arr;
}

std::string snapshot_csv(const snapshot_series& series, const app_config& cfg) {
    std::ostringstream out;
    out << csv_provenance(cfg);
    out << "# rule: " << series.rule << " (J = " << series.j << ")\n";
    out << "t,v,y\n";
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        out << heston::io::g17(series.t[i]) << ',' << heston::io::g17(series.v[i]) << ','
            << heston::io::g17(series.y[i]) << '\n';
    }
    return out.str();
}

std::string rule_file_tag(const heston::rv::j_rule& rule) {
    const std::string spec = rule_spec(rule);
    if (spec == "1/eps") return "Jinv";
    if (spec == "1/eps^2") return "Jinv2";
    return "J" + spec;
}

}  // namespace hestvol
