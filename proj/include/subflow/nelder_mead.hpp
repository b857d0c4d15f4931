#pragma once

#include <functional>
#include <vector>

namespace subflow::numerics {

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * Derivative-free simplex minimization (Nelder-Mead with standard
 * reflection/expansion/contraction/shrink coefficients and one restart
 * from the best point to polish flat regions).
 *
 * Stops when the simplex diameter drops below `tol` or after `max_iter`
 * objective evaluations; the best point found so far is always returned,
 * with `converged` flagging which exit was taken.
 */
MinimizeResult minimize_derivative_free(const std::function<double(const std::vector<double>&)>& objective,
                                        const std::vector<double>& start, double tol = 1e-8,
                                        int max_iter = 4000);

} // namespace subflow::numerics
