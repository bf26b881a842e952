#pragma once

#include "app_config.hpp"

#include <heston/analytic_checks.hpp>
#include <heston/experiments.hpp>

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hestvol {

/// One (t, V_t, Y_t^eps) trajectory for a single partition rule, plus the
/// deviation diagnostics that go into the manifest.
struct snapshot_series {
    std::string rule;
    long j = 0;
    std::vector<double> t;
    std::vector<double> v;
    std::vector<double> y;
    double max_abs_dev = 0.0;
    double threshold = 0.0;  // 3 sqrt(K(0) eps), the excursion scale
    long n_excursions = 0;
};

/// Writes content to path via a temp file in the same directory and an atomic
/// rename, so a failed run never leaves a truncated artifact behind.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Single-line JSON echo of the resolved config, prefixed "# config: ", for
/// the top of every CSV artifact.
std::string csv_provenance(const app_config& cfg);

nlohmann::ordered_json lq_reports_json(std::span<const heston::mc::lq_report> reports);
nlohmann::ordered_json estimator_reports_json(
    std::span<const heston::mc::estimator_report> reports);
nlohmann::ordered_json checks_json(std::span<const heston::check_result> checks);
nlohmann::ordered_json snapshot_json(std::span<const snapshot_series> series);

std::string snapshot_csv(const snapshot_series& series, const app_config& cfg);

/// File tag for a partition rule: J10, J40, Jinv, Jinv2, ...
std::string rule_file_tag(const heston::rv::j_rule& rule);

}  // namespace hestvol
