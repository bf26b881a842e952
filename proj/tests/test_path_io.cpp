#include <heston/errors.hpp>
#include <heston/params.hpp>
#include <heston/path_io.hpp>
#include <heston/sim.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const heston::heston_params base = heston::validate_params(1.7, 4.0, 2.0, 0.05, 0.0);

struct temp_dir {
    fs::path dir;
    temp_dir() {
        dir = fs::temp_directory_path() /
              ("hestvol-test-" + std::to_string(::getpid()) + "-" +
               std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~temp_dir() { fs::remove_all(dir); }
    fs::path operator/(const char* name) const { return dir / name; }
    static inline int counter = 0;
};

heston::sim::path_bundle small_bundle(bool variances) {
    heston::sim::sim_config cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 0.05;
    cfg.n_paths = 3;
    cfg.seed = 1234;
    cfg.store_variance = variances;
    return heston::sim::simulate(base, cfg);
}

}  // namespace

TEST_CASE("path dumps round trip bit for bit", "[path_io]") {
    temp_dir tmp;
    const auto bundle = small_bundle(true);
    const auto file = tmp / "paths.hstp";
    heston::sim::write_path_dump(bundle, file);
    REQUIRE(fs::exists(file));
    REQUIRE(fs::exists(file.string() + ".var"));

    const auto back = heston::sim::read_path_dump(file);
    REQUIRE(back.n_paths() == bundle.n_paths());
    REQUIRE(back.n_samples() == bundle.n_samples());
    REQUIRE(back.grid_dt() == bundle.grid_dt());
    REQUIRE(back.seed() == bundle.seed());
    REQUIRE(back.has_variance());
    for (std::size_t p = 0; p < bundle.n_paths(); ++p) {
        const auto a = bundle.returns(p);
        const auto b = back.returns(p);
        for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
        const auto va = bundle.variances(p);
        const auto vb = back.variances(p);
        for (std::size_t i = 0; i < va.size(); ++i) REQUIRE(va[i] == vb[i]);
    }
}

TEST_CASE("a dump without variances reads back without the sibling", "[path_io]") {
    temp_dir tmp;
    const auto bundle = small_bundle(false);
    const auto file = tmp / "ret-only.hstp";
    heston::sim::write_path_dump(bundle, file);
    CHECK_FALSE(fs::exists(file.string() + ".var"));
    const auto back = heston::sim::read_path_dump(file);
    CHECK_FALSE(back.has_variance());
    REQUIRE(back.n_paths() == 3);
}

TEST_CASE("missing files and bad headers are io errors", "[path_io]") {
    temp_dir tmp;
    CHECK_THROWS_AS(heston::sim::read_path_dump(tmp / "absent.hstp"),
                    heston::io_error);

    const auto garbled = tmp / "garbled.hstp";
    {
        std::ofstream out(garbled, std::ios::binary);
        out << "BOGUS HEADER AND THEN SOME PADDING TO GET PAST THE MAGIC";
    }
    CHECK_THROWS_AS(heston::sim::read_path_dump(garbled), heston::io_error);
}

TEST_CASE("a truncated payload is rejected", "[path_io]") {
    temp_dir tmp;
    const auto bundle = small_bundle(false);
    const auto file = tmp / "full.hstp";
    heston::sim::write_path_dump(bundle, file);

    const auto cut = tmp / "cut.hstp";
    {
        std::ifstream in(file, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        bytes.resize(bytes.size() - 9);
        std::ofstream out(cut, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(heston::sim::read_path_dump(cut), heston::io_error);
}
