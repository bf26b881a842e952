#pragma once

#include <heston/params.hpp>
#include <heston/realized_vol.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hestvol {

enum class study_kind { lq_convergence, estimator_convergence, snapshot, analytic_check };

std::string study_name(study_kind s);
study_kind parse_study(const std::string& name);

enum class out_format { csv, json, both };

std::string format_name(out_format f);
out_format parse_format(const std::string& name);

/// Everything a run needs, resolved from (defaults, preset, config file,
/// environment, flags) in that order of increasing precedence. One struct for
/// all four studies; fields a study does not use are ignored by it.
struct app_config {
    study_kind study = study_kind::lq_convergence;

    heston::heston_params model{1.7, 4.0, 2.0, 0.05, 0.0};

    // grids
    std::vector<double> eps_grid{0.1, 0.05, 0.02, 0.01};
    std::vector<double> beta_grid;  // empty -> {model.beta}
    std::vector<heston::rv::j_rule> j_rules{heston::rv::j_rule::constant(10),
                                            heston::rv::j_rule::constant(40),
                                            heston::rv::j_rule::inverse()};

    // lq-convergence
    std::vector<int> q_list{2, 4};
    double t_eval = 1.0;
    long n_blocks = 20;
    long block_size = 500;

    // estimator-convergence; the first entry of j_rules names its window rule
    std::vector<double> lags{0.6};
    long mc = 200;
    double c_n = 100.0;
    std::optional<double> delta_override;

    // snapshot
    double snap_epsilon = 0.01;
    std::optional<double> snap_delta;

    // sim
    double dt = 1e-5;
    double horizon = 1.0;  // right endpoint of the snapshot grid
    std::uint64_t seed = 42;
    std::optional<double> v0;
    double r0 = 0.0;

    // output
    std::string out_dir = "out";
    out_format format = out_format::csv;
    int jobs = 1;
    bool cache = true;

    [[nodiscard]] std::vector<double> resolved_betas() const;
};

/// Spelling used in configs and reports: "10" / "1/eps" / "1/eps^2".
std::string rule_spec(const heston::rv::j_rule& rule);
heston::rv::j_rule parse_rule(const std::string& spec);

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
/// Throws config_error for an unknown name.
app_config preset(const std::string& name);

/// Lays the JSON document over `base`. Unknown keys, wrong types and malformed
/// values all throw config_error.
app_config apply_json(const nlohmann::ordered_json& doc, app_config base);

/// Reads and parses a config file, layered over `base`.
app_config load_config_file(const std::string& path, app_config base);

/// Full resolved configuration; round-trips through apply_json.
nlohmann::ordered_json to_json(const app_config& cfg);

/// Cross-field checks that do not need simulation: grid positivity, model
/// validity and the study-specific alignment rules (dt divides epsilon/J and
/// the window spacing). Throws config_error (or the model's own errors).
void validate(const app_config& cfg);

}  // namespace hestvol
