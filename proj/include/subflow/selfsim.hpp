#pragma once

#include <vector>

namespace subflow::selfsim {

/// Boundary condition driving the flow at x = 0.
enum class Boundary {
    concentration, ///< u(0, t) held at a constant value
    flux           ///< inflow -D0 d(u^{m+1})/dx at x = 0 held constant
};

/// Fractional diffusion problem  d^alpha_t u = (u^m u_x)_x  in similarity form.
struct SimilarityProblem {
    double alpha; ///< time-derivative order, in (0, 1]
    double m;     ///< diffusivity exponent, > 0
    Boundary bc = Boundary::concentration;
};
void validate(const SimilarityProblem& p);

/// u(x, t) = t^a U(x / t^b); the pair (a, b) fixed by the boundary condition
/// through 2b - m a = alpha.
struct SimilarityExponents {
    double a;
    double b;
};
SimilarityExponents similarity_exponents(const SimilarityProblem& p);

/// Constants of the reduced equation
///   (y')^2 / m + y y'' = A y + (B/m)(1 - z) y',   y(0) = 0, y'(0) = B,
/// posed on z = 1 - eta/eta_star.
struct ReducedODECoefficients {
    double A;
    double B;
};
ReducedODECoefficients ode_coefficients(const SimilarityProblem& p);

/**
 * Taylor coefficients a_0..a_N of y about z = 0 from the recurrence the
 * reduced equation induces. a_0 = 0, a_1 = B; throws ValidationError when
 * B = 0 (degenerate front).
 */
std::vector<double> taylor_coefficients(const ReducedODECoefficients& abc, double m, int n_terms);

/// Horner evaluation of the truncated series.
double eval_y(const std::vector<double>& coeffs, double z);

/// Residual of the reduced equation at z for the truncated series.
double ode_residual(const ReducedODECoefficients& abc, double m,
                    const std::vector<double>& coeffs, double z);

/// Complete truncated solution: exponents, reduced-equation constants,
/// series coefficients and the wetting front position.
struct SeriesSolution {
    SimilarityProblem problem;
    SimilarityExponents exponents;
    ReducedODECoefficients abc;
    std::vector<double> coeffs;
    double eta_star;
};
SeriesSolution solve_series(const SimilarityProblem& p, int n_terms);

/// Front position eta_star from the closure conditions at z = 1
/// (eta = 0, where the boundary condition applies).
double wetting_front(const SimilarityProblem& p, const std::vector<double>& coeffs);

/// Shape U(eta) = (m eta_star^2 y(1 - eta/eta_star))^{1/m}, zero past the front.
double profile(const SeriesSolution& sol, double eta);

/// dU/deta at eta = 0 (finite for m <= 1, used by the flux closure checks).
double profile_derivative_at_zero(const SeriesSolution& sol);

/**
 * Large-m closedform: y ~ y0 + y1/m with
 *   y0 = A z^2/2 + B z
 * and y1 the first correction, logarithmic in z. When A = 0 (alpha = 1,
 * constant-concentration) the correction degenerates and only y0 is used.
 */
struct PerturbationSolution {
    ReducedODECoefficients abc;
    double m;
    bool degenerate_A;
    double y0(double z) const;
    double y1(double z) const;
    double operator()(double z) const;
};
PerturbationSolution make_perturbation(const ReducedODECoefficients& abc, double m);
double perturbation_y(const ReducedODECoefficients& abc, double m, double z);

/// How to evaluate the moisture integral int_0^{eta_star} U d eta.
enum class MoistureForm {
    one_term,  ///< a_1 only; closed form
    two_term,  ///< a_1, a_2; hypergeometric closed form
    quadrature ///< all coefficients; weighted Gauss rule
};

/// Cumulative moisture  int_0^infty u dx = t^{a+b} int_0^{eta_star} U d eta.
double cumulative_moisture(const SeriesSolution& sol, double t,
                           MoistureForm form = MoistureForm::quadrature);

/// Physical scales attached to the similarity solution.
struct Scaling {
    double length = 1.0;      ///< L
    double diffusivity = 1.0; ///< D0
    double amplitude = 1.0;   ///< boundary concentration C or boundary flux Q
};

/// Dimensional field u(x, t) built from a similarity solution and scales.
struct DimensionalModel {
    SeriesSolution sol;
    double time_scale; ///< T
    double amplitude;  ///< prefactor of U
    double length;     ///< L
    double operator()(double x, double t) const;
};
DimensionalModel dimensionalize(const SeriesSolution& sol, const Scaling& scaling);

} // namespace subflow::selfsim
