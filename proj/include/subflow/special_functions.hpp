#pragma once

namespace subflow::numerics {

/**
 * Gamma function.
 *
 * Lanczos approximation (g = 7, nine coefficients) on the right half-plane,
 * extended to x < 0.5 by the reflection formula. Accurate to at least 12
 * significant digits on [-20, 50] away from the poles.
 *
 * Throws PoleError at non-positive integers.
 */
double gamma_fn(double x);

/// 1/Gamma(x) as an entire function: returns exactly 0 at non-positive integers.
double reciprocal_gamma(double x);

/// log|Gamma(x)| with the sign of Gamma(x), defined for any non-pole real x.
/// Long-double precision; used where Gamma ratios would overflow or cancel.
struct LogGamma {
    long double log_abs;
    int sign;
};
LogGamma log_gamma(long double x);

/**
 * Gauss hypergeometric function 2F1(a, b; c; z) by its power series.
 *
 * Valid for |z| < 1, or any z when a or b is a non-positive integer (the
 * series terminates). Terms are accumulated until the ratio test reaches
 * relative 1e-14. Throws ValidationError for |z| >= 1 in the non-terminating
 * case and PoleError when c is a non-positive integer.
 */
double hyp2f1(double a, double b, double c, double z);

} // namespace subflow::numerics
