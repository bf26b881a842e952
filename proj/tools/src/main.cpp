#include "app_config.hpp"
#include "runner.hpp"

#include <heston/errors.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

namespace {

int report_error(const char* type, const std::string& message, int code) {
    const nlohmann::ordered_json err = {
        {"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
    std::fputs((err.dump() + "\n").c_str(), stderr);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heston volatility studies: simulation, realized-volatility error "
                 "scaling and moment-based parameter estimation"};
    app.set_version_flag("--version", HESTVOL_VERSION);
    app.fallthrough(true);

    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::string format_str;
    std::string target;
    std::uint64_t seed = 0;
    int jobs = 0;

    auto* opt_config =
        app.add_option("--config", config_path, "JSON experiment configuration file")
            ->envname("HESTON_CONFIG");
    auto* opt_preset = app.add_option("--preset", preset_name,
                                      "named preset to start from (see print-presets)")
                           ->envname("HESTON_PRESET");
    auto* opt_out = app.add_option("--out", out_dir, "output directory")
                        ->envname("HESTON_OUT");
    auto* opt_seed =
        app.add_option("--seed", seed, "base RNG seed")->envname("HESTON_SEED");
    auto* opt_jobs =
        app.add_option("--jobs", jobs, "worker thread cap; 0 = all hardware threads")
            ->envname("HESTON_JOBS");
    auto* opt_format =
        app.add_option("--format", format_str, "artifact format: csv, json or both")
            ->envname("HESTON_FORMAT");

    auto* sub_run = app.add_subcommand(
        "run", "Run the configured study (optionally name a study or preset)");
    sub_run->add_option("target", target, "study or preset name");
    sub_run->fallthrough(true);
    auto* sub_snapshot = app.add_subcommand(
        "snapshot", "Emit (t, V_t, Y_t^eps) trajectories for one simulated path");
    sub_snapshot->fallthrough(true);
    auto* sub_check = app.add_subcommand(
        "analytic-check", "Cross-validate every closed form against quadrature");
    sub_check->fallthrough(true);
    auto* sub_presets =
        app.add_subcommand("print-presets", "Print all named presets as JSON");
    sub_presets->fallthrough(true);
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("config", e.what(), 2);
    }

    bool resolving = true;
    try {
        if (sub_presets->parsed()) {
            nlohmann::ordered_json presets;
            for (const auto& name : hestvol::preset_names()) {
                presets[name] = hestvol::to_json(hestvol::preset(name));
            }
            const nlohmann::ordered_json doc = {{"presets", presets}};
            std::puts(doc.dump(2).c_str());
            return 0;
        }

        hestvol::app_config cfg;
        bool have_study_override = false;
        hestvol::study_kind study_override = hestvol::study_kind::lq_convergence;

        if (opt_preset->count() > 0) cfg = hestvol::preset(preset_name);
        if (sub_run->parsed() && !target.empty()) {
            if (hestvol::is_preset(target)) {
                if (opt_preset->count() > 0) {
                    throw heston::config_error(
                        "give either --preset or a preset positional, not both");
                }
                cfg = hestvol::preset(target);
            } else {
                try {
                    study_override = hestvol::parse_study(target);
                } catch (const heston::config_error&) {
                    throw heston::config_error("unknown study or preset \"" + target +
                                               "\"");
                }
                have_study_override = true;
            }
        }
        if (opt_config->count() > 0) {
            cfg = hestvol::load_config_file(config_path, std::move(cfg));
        }
        if (have_study_override) cfg.study = study_override;
        if (sub_snapshot->parsed()) cfg.study = hestvol::study_kind::snapshot;
        if (sub_check->parsed()) cfg.study = hestvol::study_kind::analytic_check;
        if (opt_out->count() > 0) cfg.out_dir = out_dir;
        if (opt_seed->count() > 0) cfg.seed = seed;
        if (opt_jobs->count() > 0) cfg.jobs = jobs;
        if (opt_format->count() > 0) cfg.format = hestvol::parse_format(format_str);
        cfg.jobs = hestvol::effective_jobs(cfg.jobs);
        hestvol::validate(cfg);

        resolving = false;
        return hestvol::run_study(cfg);
    } catch (const heston::config_error& e) {
        return report_error("config", e.what(), 2);
    } catch (const heston::error& e) {
        if (resolving) return report_error("config", e.what(), 2);
        return report_error("runtime", e.what(), 3);
    } catch (const std::exception& e) {
        if (resolving) return report_error("config", e.what(), 2);
        return report_error("runtime", e.what(), 3);
    }
}
