#pragma once

#include <functional>

namespace heston {

struct quad_result {
    double value;
    double error_estimate;
    int evaluations;
};

/// Globally adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// The worst interval is bisected until the accumulated error estimate drops
/// below max(abs_tol, rel_tol * |integral|). Throws domain_error if the
/// tolerance cannot be met within the interval budget.
quad_result integrate(const std::function<double(double)>& f, double a, double b,
                      double abs_tol = 1e-10, double rel_tol = 1e-12);

}  // namespace heston
