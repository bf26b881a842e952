#include <heston/path_io.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>

namespace heston::sim {

static_assert(std::endian::native == std::endian::little,
              "path dumps are little-endian; byte-swapped platforms are unsupported");

namespace {

constexpr char kMagic[4] = {'H', 'S', 'T', 'P'};
constexpr std::uint32_t kVersion = 1;

struct dump_header {
    std::uint32_t version;
    std::uint64_t n_paths;
    std::uint64_t n_steps;
    double dt;
    std::uint64_t seed;
};

void write_rows(const std::filesystem::path& file, const dump_header& h,
                const std::function<std::span<const double>(std::size_t)>& row) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + file.string() + " for writing");
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&h.version), sizeof h.version);
    out.write(reinterpret_cast<const char*>(&h.n_paths), sizeof h.n_paths);
    out.write(reinterpret_cast<const char*>(&h.n_steps), sizeof h.n_steps);
    out.write(reinterpret_cast<const char*>(&h.dt), sizeof h.dt);
    out.write(reinterpret_cast<const char*>(&h.seed), sizeof h.seed);
    for (std::size_t p = 0; p < h.n_paths; ++p) {
        const std::span<const double> r = row(p);
        out.write(reinterpret_cast<const char*>(r.data()),
                  static_cast<std::streamsize>(r.size() * sizeof(double)));
    }
    if (!out) throw io_error("short write to " + file.string());
}

dump_header read_header(std::ifstream& in, const std::filesystem::path& file) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw io_error(file.string() + " is not a path dump (bad magic)");
    }
    dump_header h{};
    in.read(reinterpret_cast<char*>(&h.version), sizeof h.version);
    in.read(reinterpret_cast<char*>(&h.n_paths), sizeof h.n_paths);
    in.read(reinterpret_cast<char*>(&h.n_steps), sizeof h.n_steps);
    in.read(reinterpret_cast<char*>(&h.dt), sizeof h.dt);
    in.read(reinterpret_cast<char*>(&h.seed), sizeof h.seed);
    if (!in) throw io_error(file.string() + " has a truncated header");
    if (h.version != kVersion) {
        throw io_error(file.string() + " has unsupported dump version " +
                       std::to_string(h.version));
    }
    return h;
}

std::vector<double> read_rows(const std::filesystem::path& file, dump_header& h_out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("cannot open " + file.string());
    h_out = read_header(in, file);
    const std::size_t total = h_out.n_paths * (h_out.n_steps + 1);
    std::vector<double> data(total);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != total * sizeof(double)) {
        throw io_error(file.string() + " has a truncated payload");
    }
    return data;
}

std::filesystem::path var_sibling(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".var";
    return p;
}

}  // namespace

void write_path_dump(const path_bundle& bundle, const std::filesystem::path& path) {
    const dump_header h{kVersion, bundle.n_paths(), bundle.n_samples() - 1,
                        bundle.grid_dt(), bundle.seed()};
    write_rows(path, h, [&](std::size_t p) { return bundle.returns(p); });
    if (bundle.has_variance()) {
        write_rows(var_sibling(path), h, [&](std::size_t p) { return bundle.variances(p); });
    }
}

path_bundle read_path_dump(const std::filesystem::path& path) {
    dump_header h{};
    std::vector<double> returns = read_rows(path, h);

    std::vector<double> variances;
    const std::filesystem::path var_file = var_sibling(path);
    if (std::filesystem::exists(var_file)) {
        dump_header hv{};
        variances = read_rows(var_file, hv);
        if (hv.n_paths != h.n_paths || hv.n_steps != h.n_steps) {
            throw io_error(var_file.string() + " does not match its return dump");
        }
    }

    sim_config cfg;
    cfg.dt = h.dt;
    cfg.horizon = h.dt * static_cast<double>(h.n_steps);
    cfg.n_paths = h.n_paths;
    cfg.seed = h.seed;
    cfg.store_variance = !variances.empty();
    return {heston_params{}, cfg, static_cast<std::size_t>(h.n_steps + 1),
            std::move(returns), std::move(variances)};
}

}  // namespace heston::sim
