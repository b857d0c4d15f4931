#pragma once

#include <functional>
#include <vector>

namespace subflow::numerics {

enum class QuadratureKind {
    jacobi_weighted, ///< Gauss-Jacobi rule with the weight built in
    plain_adaptive   ///< substitution + adaptive Simpson fallback
};

struct QuadratureSpec {
    int order = 64;                                   ///< Gauss point count, >= 2
    QuadratureKind kind = QuadratureKind::jacobi_weighted;
    double rel_tol = 1e-10;                           ///< adaptive relative tolerance, > 0
};
void validate(const QuadratureSpec& spec);

struct QuadratureRule {
    std::vector<double> nodes;   ///< in (0, 1)
    std::vector<double> weights; ///< sum to Beta(beta+1, gamma)
};

/**
 * Gauss rule for the weighted integral
 *
 *     int_0^1 (1-z)^(gamma-1) z^beta f(z) dz,    beta > -1, gamma > 0.
 *
 * Recurrence coefficients of the (shifted) Jacobi polynomials feed the
 * symmetric tridiagonal eigenproblem (Golub-Welsch); nodes are eigenvalues,
 * weights come from the first eigenvector components.
 */
QuadratureRule jacobi_rule(int order, double beta, double gamma);

/// Weighted integral of f against (1-z)^(gamma-1) z^beta over [0, 1]
/// using either the Gauss-Jacobi rule or the adaptive fallback.
double integrate_jacobi(const std::function<double(double)>& f, double beta, double gamma,
                        const QuadratureSpec& spec = {});

/// Adaptive Simpson on [a, b]. Throws ToleranceError (with the achieved
/// estimate) if the local refinement cannot reach rel_tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

} // namespace subflow::numerics
