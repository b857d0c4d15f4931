#pragma once

#include "subflow/quadrature.hpp"

#include <functional>
#include <optional>

namespace subflow::ek {

/// Parameters of the Erdelyi-Kober operator I^{beta,gamma}_delta.
struct EKParams {
    double beta;  ///< > -1
    double gamma; ///< > 0
    double delta; ///< != 0; negative values need compactly supported profiles
};
void validate(const EKParams& p);

/**
 * Profile the operator acts on. `eval` is required; `deriv_k(eta, k)` is the
 * k-th derivative (k >= 1) and is only needed by the series expansion;
 * `support_end` marks a compact support [0, support_end) and is required by
 * the direct form when delta < 0.
 */
struct ProfileFunction {
    std::function<double(double)> eval;
    std::function<double(double, int)> deriv_k;
    std::optional<double> support_end;
};

/// e^{-eta} with all derivatives; decays at infinity.
ProfileFunction exp_decay_profile();

/// sqrt(1 - eta) on [0, 1), zero beyond; all derivatives on [0, 1).
ProfileFunction sqrt_support_profile();

/**
 * Expansion coefficient lambda_k: the operator applied to eta^k at eta = 1,
 *
 *   lambda_k = sum_{j=0}^{k} binom(k, j) (-1)^j Gamma(beta + 1 + j/delta)
 *              / Gamma(beta + gamma + 1 + j/delta).
 *
 * The alternating sum loses roughly k log10(2) digits, so it is only used
 * for small k (or delta < 0, where the integral form is unavailable);
 * delta = 1 collapses to a single Gamma ratio, and otherwise the integral
 * form takes over. Throws PoleError if a sum term hits a Gamma pole.
 */
double lambda_coeff(int k, const EKParams& p);

/// lambda_k by quadrature of (1/Gamma(gamma)) int_0^1 (1-z)^(gamma-1) z^beta
/// (1 - z^{1/delta})^k dz. Requires delta > 0.
double lambda_coeff_integral(int k, const EKParams& p,
                             const numerics::QuadratureSpec& spec = {});

/// Large-k decay (-1)^k Gamma(delta(beta+1)) delta / (Gamma(gamma) k^{delta(beta+1)}).
double lambda_asymptotic(int k, const EKParams& p);

/// How far lambda_0 sits from 1 and how large lambda_1..lambda_{k_max} are
/// when gamma is taken to eps: the operator degenerates to the identity.
struct GammaLimitReport {
    double lambda0_error;   ///< |lambda_0 - 1|
    double max_abs_higher;  ///< max_{1<=k<=k_max} |lambda_k|
};
GammaLimitReport lambda_gamma_limit_check(const EKParams& p, int k_max, double eps);

/**
 * The operator itself,
 *
 *   (I U)(eta) = (1/Gamma(gamma)) int_0^1 (1-z)^(gamma-1) z^beta U(eta z^{1/delta}) dz,
 *
 * by weighted quadrature. For delta < 0 the substitution s = z^{1/delta}
 * maps onto [1, infinity); compact support truncates it at support_end/eta
 * (MissingSupportError if the profile has none), and eta >= support_end
 * gives 0.
 */
double ek_apply_direct(const ProfileFunction& U, double eta, const EKParams& p,
                       const numerics::QuadratureSpec& spec = {});

/// N-term expansion sum_{k<N} lambda_k U^{(k)}(eta) eta^k / k!.
double ek_apply_series(const ProfileFunction& U, double eta, const EKParams& p, int n_terms);

/// Remainder bound  deriv_norm * |lambda_N| |eta|^N / N!  for the N-term
/// expansion, with deriv_norm a bound on |U^{(N)}| over the relevant range.
double ek_series_error_bound(double deriv_norm, double eta, const EKParams& p, int n_terms);

/// One-term bound  lambda_0 * sup_z |U(eta z^{1/delta}) - U(eta)|, the sup
/// taken over a dense z sample of (0, 1].
double ek_one_term_error_bound(const ProfileFunction& U, double eta, const EKParams& p);

} // namespace subflow::ek
