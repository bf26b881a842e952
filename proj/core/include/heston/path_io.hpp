#pragma once

#include <heston/sim.hpp>

#include <filesystem>

namespace heston::sim {

/// Writes the bundle's return rows to a binary dump: header (magic "HSTP",
/// version u32, n_paths u64, n_steps u64, dt f64, seed u64) followed by
/// row-major little-endian f64 samples, n_steps + 1 per path. When variances
/// are stored they go to a sibling file with the same layout at
/// path + ".var". Used only for caching between CLI stages.
void write_path_dump(const path_bundle& bundle, const std::filesystem::path& path);

/// Reads a dump written by write_path_dump; picks up the ".var" sibling when
/// present. Throws io_error on missing file, bad magic, unknown version or a
/// truncated payload.
path_bundle read_path_dump(const std::filesystem::path& path);

}  // namespace heston::sim
