#pragma once

#include "subflow/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace subflow::numerics {

/**
 * Thomas algorithm for a tridiagonal system
 *
 *     diag[i] x[i] + upper[i] x[i+1] + lower[i-1] x[i-1] = rhs[i].
 *
 * `lower` and `upper` have size n-1. Throws SingularPivotError if forward
 * elimination hits a vanishing pivot. O(n), no pivoting; fine for the
 * diagonally dominant systems produced by the implicit time steps.
 */
inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n)
        throw ValidationError("solve_tridiagonal: inconsistent band sizes");

    std::vector<double> c(n - 1), d(n);
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot))
        throw SingularPivotError("solve_tridiagonal: zero pivot at row 0");
    if (n > 1) c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw SingularPivotError("solve_tridiagonal: zero pivot at row " + std::to_string(i));
        if (i < n - 1) c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        d[i] -= c[i] * d[i + 1];
    return d;
}

} // namespace subflow::numerics
