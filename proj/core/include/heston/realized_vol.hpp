#pragma once

#include <heston/sim.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace heston::rv {

/// Partition-size rule J(epsilon): a fixed constant, ceil(1/eps) or
/// ceil(1/eps^2).
class j_rule {
public:
    static j_rule constant(long j);
    static j_rule inverse();
    static j_rule inverse_square();

    /// Resolved partition size; always >= 2.
    [[nodiscard]] long resolve(double epsilon) const;
    [[nodiscard]] std::string label() const;

    [[nodiscard]] bool operator==(const j_rule&) const = default;

private:
    enum class kind { constant, inverse, inverse_square };
    j_rule(kind k, long value) : kind_(k), value_(value) {}
    kind kind_;
    long value_;
};

/// Window and sub-sampling scheme: window width epsilon, partition rule J,
/// N = ceil(c_n / epsilon) observations spaced Delta = sqrt(epsilon) apart
/// (or a constant override).
struct window_scheme {
    double epsilon = 0.0;
    j_rule j = j_rule::inverse();
    double c_n = 100.0;
    std::optional<double> delta_override;
};

struct resolved_scheme {
    double epsilon;
    long j;
    long n;
    double delta;        // before snapping to a grid
    bool overlapping;    // delta < epsilon: windows overlap (permitted, warned)
};

resolved_scheme resolve_scheme(const window_scheme& scheme);

/// Realized volatility over the window (t - epsilon, t]:
/// Y = (1/eps) sum_{k=1..J} (R_{t_k} - R_{t_{k-1}})^2 with t_k = t - eps + k eps/J.
/// `returns` samples R on the uniform grid (0, grid_dt, 2 grid_dt, ...); every
/// t_k must land exactly on that grid -- no interpolation is performed.
double realized_volatility(std::span<const double> returns, double grid_dt, double t,
                           double epsilon, long j);

/// Sub-sampled observables W_k = Y^eps_{k Delta} for k = k0..N, where k0 is
/// the smallest k with k Delta >= epsilon. Delta is snapped to the bundle grid.
struct realized_series {
    std::vector<double> w;  // observations, w[i] = W_{k0 + i}
    long k0 = 1;
    long n = 0;             // last index; w.size() == n - k0 + 1
    double epsilon = 0.0;
    double delta = 0.0;     // snapped spacing actually used
    long j = 0;
    std::size_t path_id = 0;

    [[nodiscard]] double time_of(std::size_t i) const {
        return (static_cast<double>(k0) + static_cast<double>(i)) * delta;
    }
};

realized_series make_realized_series(const sim::path_bundle& bundle, std::size_t path,
                                     const window_scheme& scheme);

/// CSV export: '#'-prefixed comment header carrying epsilon, J, Delta and the
/// RNG seed, then rows (k, t = k Delta, W_k).
void write_csv(const realized_series& series, std::uint64_t seed, std::ostream& out);

}  // namespace heston::rv
