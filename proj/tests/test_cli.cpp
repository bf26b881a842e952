#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct cli_result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct temp_dir {
    fs::path dir;
    temp_dir() {
        dir = fs::temp_directory_path() /
              ("hestvol-cli-" + std::to_string(::getpid()) + "-" +
               std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~temp_dir() { fs::remove_all(dir); }
    fs::path operator/(const char* name) const { return dir / name; }
    static inline int counter = 0;
};

cli_result run_cli(const std::string& args, const std::string& env = "") {
    const temp_dir capture;
    const fs::path out = capture / "stdout";
    const fs::path err = capture / "stderr";
    std::string cmd = "cd " + capture.dir.string() + " && " + env +
                      (env.empty() ? "" : " ") + HESTVOL_BIN + " " + args + " > " +
                      out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    cli_result r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string tiny_lq_config(const std::string& out_dir) {
    json cfg;
    cfg["study"] = "lq-convergence";
    cfg["grids"] = {{"epsilon", {0.1, 0.05}}, {"j_rules", {"10"}}};
    cfg["lq"] = {{"q", {2}}, {"t_eval", 0.2}, {"n_blocks", 2}, {"block_size", 2}};
    cfg["sim"] = {{"dt", 1e-3}, {"horizon", 0.2}, {"seed", 5}};
    cfg["output"] = {{"dir", out_dir}, {"format", "both"}};
    return cfg.dump();
}

}  // namespace

TEST_CASE("print-presets emits parseable configurations", "[cli]") {
    const auto r = run_cli("print-presets");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("presets"));
    CHECK(doc["presets"].size() == 7);
    CHECK(doc["presets"].contains("desk-default"));
    CHECK(doc["presets"].contains("paper-9.2"));
    for (const auto& [name, preset] : doc["presets"].items()) {
        CHECK(preset.contains("study"));
        CHECK(preset.contains("sim"));
    }
}

TEST_CASE("a study runs end to end and leaves a manifest", "[cli]") {
    temp_dir tmp;
    const fs::path out_dir = tmp / "out";
    const fs::path cfg_path = tmp / "lq.json";
    write_file(cfg_path, tiny_lq_config(out_dir.string()));

    const auto r = run_cli("run --config " + cfg_path.string());
    INFO(r.err);
    REQUIRE(r.exit_code == 0);

    const json manifest = json::parse(slurp(out_dir / "manifest.json"));
    CHECK(manifest["tool"] == "hestvol");
    CHECK(manifest["study"] == "lq-convergence");
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["seed"] == 5);
    REQUIRE(manifest.contains("outputs"));
    for (const auto& entry : manifest["outputs"]) {
        const fs::path file = out_dir / entry["file"].get<std::string>();
        REQUIRE(fs::exists(file));
        CHECK(fs::file_size(file) == entry["bytes"].get<std::uintmax_t>());
    }

    const std::string cells = slurp(out_dir / "lq_cells.csv");
    CHECK(cells.rfind("# config: {", 0) == 0);  // provenance comes first
    CHECK(cells.find("lq-convergence,0,") != std::string::npos);
    const json report = json::parse(slurp(out_dir / "lq_report.json"));
    REQUIRE(report.contains("reports"));
    CHECK(report["reports"].at(0).contains("cells"));
}

TEST_CASE("reruns are byte-identical regardless of the job count", "[cli]") {
    temp_dir tmp;
    const fs::path out_dir = tmp / "out";
    const fs::path cfg_path = tmp / "lq.json";
    write_file(cfg_path, tiny_lq_config(out_dir.string()));

    REQUIRE(run_cli("run --config " + cfg_path.string() + " --jobs 1").exit_code == 0);
    const std::string first_cells = slurp(out_dir / "lq_cells.csv");
    const std::string first_slopes = slurp(out_dir / "lq_slopes.csv");

    REQUIRE(run_cli("run --config " + cfg_path.string() + " --jobs 3").exit_code == 0);
    CHECK(slurp(out_dir / "lq_cells.csv") == first_cells);
    CHECK(slurp(out_dir / "lq_slopes.csv") == first_slopes);
}

TEST_CASE("config problems exit 2 with a machine-readable report and no files", "[cli]") {
    temp_dir tmp;
    const fs::path out_dir = tmp / "never";

    struct bad_case {
        std::string label;
        std::string args;
    };
    const fs::path garbage = tmp / "garbage.json";
    write_file(garbage, "{ not json");
    const fs::path unknown = tmp / "unknown.json";
    write_file(unknown, R"({"study":"lq-convergence","typo_key":1,"output":{"dir":")" +
                            out_dir.string() + R"("}})");
    const fs::path missing = tmp / "absent.json";

    for (const auto& c : {
             bad_case{"missing config", "run --config " + missing.string()},
             bad_case{"bad json", "run --config " + garbage.string()},
             bad_case{"unknown key", "run --config " + unknown.string()},
             bad_case{"unknown preset", "run --preset no-such-preset"},
             bad_case{"target and preset", "run paper-9.2 --preset desk-default"},
             bad_case{"unknown verb", "frobnicate"},
         }) {
        INFO(c.label);
        const auto r = run_cli(c.args);
        CHECK(r.exit_code == 2);
        const json err = json::parse(r.err);
        CHECK(err["error"]["exit_code"] == 2);
        CHECK_FALSE(err["error"]["message"].get<std::string>().empty());
    }
    CHECK_FALSE(fs::exists(out_dir));
}

TEST_CASE("analytic checks run from the command line", "[cli]") {
    temp_dir tmp;
    const fs::path out_dir = tmp / "checks";
    const auto r =
        run_cli("analytic-check --out " + out_dir.string() + " --format both");
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    const json manifest = json::parse(slurp(out_dir / "manifest.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["summary"]["all_pass"] == true);
    CHECK(manifest["summary"]["n_checks"].get<int>() >= 10);
    CHECK(fs::exists(out_dir / "analytic_checks.csv"));
}

TEST_CASE("seeds follow the documented precedence", "[cli]") {
    temp_dir tmp;
    const fs::path out_a = tmp / "a";
    const fs::path out_b = tmp / "b";

    auto r = run_cli("analytic-check --out " + out_a.string(), "HESTON_SEED=99");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(slurp(out_a / "manifest.json"))["seed"] == 99);

    r = run_cli("analytic-check --out " + out_b.string() + " --seed 7",
                "HESTON_SEED=99");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(slurp(out_b / "manifest.json"))["seed"] == 7);
}

TEST_CASE("snapshot runs reuse the path cache", "[cli]") {
    temp_dir tmp;
    const fs::path out_dir = tmp / "snap";
    json cfg;
    cfg["study"] = "snapshot";
    cfg["grids"] = {{"j_rules", {"10"}}};
    cfg["snapshot"] = {{"epsilon", 0.01}, {"delta_override", 0.005}};
    cfg["sim"] = {{"dt", 1e-4}, {"horizon", 0.1}, {"seed", 3}};
    cfg["output"] = {{"dir", out_dir.string()}, {"format", "csv"}};
    const fs::path cfg_path = tmp / "snap.json";
    write_file(cfg_path, cfg.dump());

    auto r = run_cli("snapshot --config " + cfg_path.string());
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    const fs::path series = out_dir / "snapshot_J10.csv";
    REQUIRE(fs::exists(series));
    const std::string first = slurp(series);
    REQUIRE(fs::exists(out_dir / "cache"));
    bool has_dump = false;
    for (const auto& e : fs::directory_iterator(out_dir / "cache")) {
        if (e.path().extension() == ".hstp") has_dump = true;
    }
    CHECK(has_dump);

    r = run_cli("snapshot --config " + cfg_path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(series) == first);
    const json manifest = json::parse(slurp(out_dir / "manifest.json"));
    CHECK(manifest["cache"]["hit"] == true);
}

TEST_CASE("the version flag reports the package version", "[cli]") {
    const auto r = run_cli("--version");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find('.') != std::string::npos);
}
