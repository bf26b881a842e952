#pragma once

#include <heston/params.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace heston {

struct check_result {
    std::string name;
    double observed;   // max relative error, or the checked value itself
    double tolerance;  // 0 for purely informational rows
    bool pass;
};

/// Cross-validates every closed-form quantity against an independent route:
/// quadrature of the densities, the moment map round trip, the central
/// chi-squared product formula, and the rescaling identity between the
/// transition density and the noncentral chi-squared law. Random draws are
/// deterministic in the seed. Pure computation; writes nothing.
std::vector<check_result> run_analytic_checks(const heston_params& p,
                                              std::uint64_t seed = 20240801,
                                              int n_pairs = 50);

/// True iff every non-informational row passes.
bool all_checks_pass(const std::vector<check_result>& results);

}  // namespace heston
