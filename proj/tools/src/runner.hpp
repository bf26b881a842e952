#pragma once

#include "app_config.hpp"

namespace hestvol {

/// Executes the configured study and writes its artifacts plus manifest.json
/// under cfg.out_dir. Returns the process exit code: 0 on success, 3 when an
/// analytic-check run completes but an identity fails. Configuration and
/// runtime problems propagate as exceptions.
int run_study(const app_config& cfg);

/// jobs <= 0 means "use every hardware thread".
int effective_jobs(int jobs);

}  // namespace hestvol
