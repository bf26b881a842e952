#pragma once

#include <stdexcept>
#include <string>

namespace heston {

/// Base class for every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter set violates the Feller condition kappa*theta/gamma^2 > 1/2.
struct feller_violation : error {
    using error::error;
};

/// An argument lies outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

/// A configuration value is inconsistent (non-integer step counts, bad grids, ...).
struct config_error : error {
    using error::error;
};

/// A requested time point does not lie on the stored sample grid.
struct grid_mismatch : error {
    using error::error;
};

/// The simulated horizon is too short for the requested window scheme.
struct horizon_too_short : error {
    using error::error;
};

/// Too few observations for the requested lag or fit.
struct insufficient_data : error {
    using error::error;
};

/// Empirical moments fell in a region where the parameter map is undefined.
struct estimation_degenerate : error {
    using error::error;
};

/// A result exceeds the representable floating-point range.
struct overflow_error : error {
    using error::error;
};

/// File or stream I/O failed.
struct io_error : error {
    using error::error;
};

}  // namespace heston
