#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace heston::sim {

/// Philox 4x32-10 counter-based generator. A block is a pure function of
/// (key, counter), so any (seed, path, step) triple can be evaluated in any
/// order on any thread with bit-identical results; that is what makes the
/// Monte Carlo studies reproducible at every --jobs setting.
struct philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }
};

struct normal_pair {
    double z0;
    double z1;
};

/// Uniform in (0, 1), strictly interior so logarithms stay finite.
inline double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normals for a given (seed, path, step), via one
/// Philox block and the Box-Muller transform. One block per Euler step keeps
/// the counter mapping trivial: counter = (path, step).
inline normal_pair gaussian_pair(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const std::array<std::uint32_t, 4> b = philox4x32::block(seed, path, step);
    const double u1 = to_unit_interval(b[0], b[1]);
    const double u2 = to_unit_interval(b[2], b[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace heston::sim
