#pragma once

#include <heston/analytic_checks.hpp>
#include <heston/experiments.hpp>

#include <iosfwd>
#include <span>
#include <string>

namespace heston::io {

/// Shortest round-trip decimal form ("%.17g"); reruns with the same config
/// and seed therefore produce byte-identical files.
std::string g17(double x);

/// Long-format study tables. Writers accept several reports (e.g. one per
/// beta) and emit a single header followed by every report's rows in order.
void write_lq_csv(std::span<const mc::lq_report> reports, std::ostream& out);
void write_lq_slopes_csv(std::span<const mc::lq_report> reports, std::ostream& out);

void write_estimator_csv(std::span<const mc::estimator_report> reports, std::ostream& out);
void write_estimator_slopes_csv(std::span<const mc::estimator_report> reports,
                                std::ostream& out);
void write_replicates_csv(std::span<const mc::estimator_report> reports, std::ostream& out);

void write_checks_csv(std::span<const check_result> checks, std::ostream& out);

}  // namespace heston::io
