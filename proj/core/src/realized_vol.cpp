#include <heston/realized_vol.hpp>

#include <heston/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace heston::rv {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Index of x on the uniform grid (0, dt, 2dt, ...). Throws if x does not land
// on a grid point; the observation scheme never interpolates.
std::int64_t grid_index(double x, double dt, const char* what) {
    const double q = x / dt;
    const auto idx = static_cast<std::int64_t>(std::llround(q));
    if (std::abs(q - static_cast<double>(idx)) > 1e-6) {
        throw grid_mismatch(std::string(what) + " = " + fmt(x) +
                            " is not a multiple of the sample spacing " + fmt(dt));
    }
    return idx;
}

double window_sum(std::span<const double> returns, std::size_t start, long j,
                  std::size_t stride) {
    double acc = 0.0;
    std::size_t lo = start;
    for (long k = 0; k < j; ++k) {
        const std::size_t hi = lo + stride;
        const double d = returns[hi] - returns[lo];
        acc += d * d;
        lo = hi;
    }
    return acc;
}

}  // namespace

j_rule j_rule::constant(long j) {
    if (j < 2) throw config_error("constant partition size must be >= 2");
    return {kind::constant, j};
}

j_rule j_rule::inverse() { return {kind::inverse, 0}; }

j_rule j_rule::inverse_square() { return {kind::inverse_square, 0}; }

long j_rule::resolve(double epsilon) const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw domain_error("window width must be positive");
    }
    switch (kind_) {
        case kind::constant:
            return value_;
        case kind::inverse:
            return std::max<long>(2, static_cast<long>(std::ceil(1.0 / epsilon)));
        case kind::inverse_square:
            return std::max<long>(2, static_cast<long>(std::ceil(1.0 / (epsilon * epsilon))));
    }
    throw config_error("unknown partition rule");
}

std::string j_rule::label() const {
    switch (kind_) {
        case kind::constant:
            return "J=" + std::to_string(value_);
        case kind::inverse:
            return "J=1/eps";
        case kind::inverse_square:
            return "J=1/eps^2";
    }
    return "?";
}

resolved_scheme resolve_scheme(const window_scheme& scheme) {
    if (!(scheme.epsilon > 0.0) || !std::isfinite(scheme.epsilon)) {
        throw config_error("window width must be positive");
    }
    if (!(scheme.c_n > 0.0)) throw config_error("sample-budget constant must be positive");
    const double delta =
        scheme.delta_override ? *scheme.delta_override : std::sqrt(scheme.epsilon);
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw config_error("observation spacing must be positive");
    }
    const double q = scheme.c_n / scheme.epsilon;
    const auto n = static_cast<long>(std::ceil(q - 1e-9 * std::max(1.0, q)));
    return {scheme.epsilon, scheme.j.resolve(scheme.epsilon), n, delta, delta < scheme.epsilon};
}

double realized_volatility(std::span<const double> returns, double grid_dt, double t,
                           double epsilon, long j) {
    if (!(grid_dt > 0.0)) throw domain_error("sample spacing must be positive");
    if (!(epsilon > 0.0)) throw domain_error("window width must be positive");
    if (j < 1) throw domain_error("partition size must be >= 1");

    const std::int64_t stride = grid_index(epsilon / static_cast<double>(j), grid_dt,
                                           "sub-interval epsilon/J");
    if (stride < 1) {
        throw grid_mismatch("sub-interval epsilon/J is finer than the sample spacing");
    }
    const std::int64_t end = grid_index(t, grid_dt, "window endpoint t");
    const std::int64_t start = end - j * stride;
    if (start < 0) throw horizon_too_short("window (t - epsilon, t] starts before time 0");
    if (end >= static_cast<std::int64_t>(returns.size())) {
        throw horizon_too_short("window endpoint t lies beyond the stored path");
    }
    return window_sum(returns, static_cast<std::size_t>(start), j,
                      static_cast<std::size_t>(stride)) /
           epsilon;
}

realized_series make_realized_series(const sim::path_bundle& bundle, std::size_t path,
                                     const window_scheme& scheme) {
    const resolved_scheme rs = resolve_scheme(scheme);
    const double grid_dt = bundle.grid_dt();
    const std::span<const double> returns = bundle.returns(path);

    const std::int64_t stride = grid_index(rs.epsilon / static_cast<double>(rs.j), grid_dt,
                                           "sub-interval epsilon/J");
    if (stride < 1) {
        throw grid_mismatch("sub-interval epsilon/J is finer than the bundle grid");
    }
    const std::int64_t s_eps = rs.j * stride;

    // Snap the observation spacing to the bundle grid so that every window
    // endpoint k*Delta is a stored sample.
    const auto s_delta = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(rs.delta / grid_dt)));
    const double delta = static_cast<double>(s_delta) * grid_dt;

    const std::int64_t k0 = (s_eps + s_delta - 1) / s_delta;  // first k with k*Delta >= eps
    const std::int64_t n = rs.n;
    if (n < k0) {
        throw insufficient_data("observation count N=" + std::to_string(n) +
                                " is below the first admissible index k0=" +
                                std::to_string(k0));
    }
    const std::int64_t last = n * s_delta;
    if (last >= static_cast<std::int64_t>(returns.size())) {
        throw horizon_too_short("series needs horizon >= " +
                                fmt(static_cast<double>(last) * grid_dt) + ", bundle has " +
                                fmt(bundle.horizon()));
    }

    realized_series series;
    series.k0 = k0;
    series.n = n;
    series.epsilon = rs.epsilon;
    series.delta = delta;
    series.j = rs.j;
    series.path_id = bundle.path_offset() + path;
    series.w.reserve(static_cast<std::size_t>(n - k0 + 1));
    for (std::int64_t k = k0; k <= n; ++k) {
        const std::int64_t start = k * s_delta - s_eps;
        series.w.push_back(window_sum(returns, static_cast<std::size_t>(start), rs.j,
                                      static_cast<std::size_t>(stride)) /
                           rs.epsilon);
    }
    return series;
}

void write_csv(const realized_series& series, std::uint64_t seed, std::ostream& out) {
    out << "# realized volatility series\n";
    out << "# epsilon=" << fmt(series.epsilon) << " J=" << series.j
        << " delta=" << fmt(series.delta) << " path=" << series.path_id << " seed=" << seed
        << "\n";
    out << "k,t,w\n";
    for (std::size_t i = 0; i < series.w.size(); ++i) {
        out << (series.k0 + static_cast<long>(i)) << ',' << fmt(series.time_of(i)) << ','
            << fmt(series.w[i]) << '\n';
    }
}

}  // namespace heston::rv
