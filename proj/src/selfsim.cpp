#include "subflow/selfsim.hpp"
#include "subflow/errors.hpp"
#include "subflow/quadrature.hpp"
#include "subflow/special_functions.hpp"

#include <cmath>

namespace subflow::selfsim {

using numerics::gamma_fn;
using numerics::hyp2f1;
using numerics::reciprocal_gamma;

void validate(const SimilarityProblem& p) {
    if (!(p.alpha > 0.0) || !(p.alpha <= 1.0))
        throw ValidationError("SimilarityProblem: alpha must be in (0, 1]");
    if (!(p.m > 0.0))
        throw ValidationError("SimilarityProblem: m must be > 0");
}

SimilarityExponents similarity_exponents(const SimilarityProblem& p) {
    validate(p);
    if (p.bc == Boundary::concentration)
        return {0.0, p.alpha / 2.0};
    return {p.alpha / (p.m + 2.0), p.alpha * (p.m + 1.0) / (p.m + 2.0)};
}

ReducedODECoefficients ode_coefficients(const SimilarityProblem& p) {
    validate(p);
    if (p.bc == Boundary::concentration) {
        // reciprocal form keeps A exactly 0 in the classical limit alpha = 1
        return {reciprocal_gamma(1.0 - p.alpha), p.alpha / (2.0 * gamma_fn(2.0 - p.alpha))};
    }
    const double a = p.alpha / (p.m + 2.0);
    const double r = gamma_fn(1.0 + a);
    return {r / gamma_fn(1.0 - p.alpha + a),
            p.alpha * (p.m + 1.0) / (p.m + 2.0) * r / gamma_fn(2.0 - p.alpha + a)};
}

std::vector<double> taylor_coefficients(const ReducedODECoefficients& abc, double m,
                                        int n_terms) {
    if (n_terms < 1)
        throw ValidationError("taylor_coefficients: n_terms must be >= 1");
    if (!(m > 0.0))
        throw ValidationError("taylor_coefficients: m must be > 0");
    const double A = abc.A, B = abc.B;
    if (B == 0.0)
        throw ValidationError("taylor_coefficients: B must be nonzero (degenerate front)");

    std::vector<double> a(n_terms + 1, 0.0);
    a[1] = B;
    for (int n = 1; n < n_terms; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n - 1; ++k)
            s += (1.0 / m) * (k + 1.0) * (n - k + 1.0) * a[k + 1] * a[n - k + 1];
        for (int k = 2; k <= n; ++k)
            s += (n - k + 1.0) * (n - k + 2.0) * a[k] * a[n - k + 2];
        a[n + 1] = ((A - B * n / m) * a[n] - s) / (B * (n + 1.0) * (n + 1.0 / m));
    }
    return a;
}

double eval_y(const std::vector<double>& coeffs, double z) {
    double y = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        y = y * z + coeffs[i];
    return y;
}

namespace {

double eval_dy(const std::vector<double>& coeffs, double z) {
    double y = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;)
        y = y * z + coeffs[i] * static_cast<double>(i);
    return y;
}

double eval_d2y(const std::vector<double>& coeffs, double z) {
    double y = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 2;)
        y = y * z + coeffs[i] * static_cast<double>(i) * static_cast<double>(i - 1);
    return y;
}

} // namespace

double ode_residual(const ReducedODECoefficients& abc, double m,
                    const std::vector<double>& coeffs, double z) {
    const double y = eval_y(coeffs, z);
    const double dy = eval_dy(coeffs, z);
    const double d2y = eval_d2y(coeffs, z);
    return dy * dy / m + y * d2y - abc.A * y - abc.B / m * (1.0 - z) * dy;
}

double wetting_front(const SimilarityProblem& p, const std::vector<double>& coeffs) {
    validate(p);
    const double y1 = eval_y(coeffs, 1.0);
    if (!(y1 > 0.0))
        throw ValidationError("wetting_front: series sum y(1) is not positive");
    if (p.bc == Boundary::concentration)
        return 1.0 / std::sqrt(p.m * y1);
    const double dy1 = eval_dy(coeffs, 1.0);
    if (!(dy1 > 0.0))
        throw ValidationError("wetting_front: series slope y'(1) is not positive");
    return std::pow(std::pow(p.m * y1, 1.0 / p.m) * dy1, -p.m / (p.m + 2.0));
}

SeriesSolution solve_series(const SimilarityProblem& p, int n_terms) {
    validate(p);
    if (n_terms < 1 || n_terms > 24)
        throw ValidationError("solve_series: n_terms must be in [1, 24]");
    SeriesSolution sol;
    sol.problem = p;
    sol.exponents = similarity_exponents(p);
    sol.abc = ode_coefficients(p);
    sol.coeffs = taylor_coefficients(sol.abc, p.m, n_terms);
    for (int j = 1; j <= 200; ++j) {
        if (!(eval_y(sol.coeffs, j / 200.0) > 0.0))
            throw ValidationError("solve_series: truncated y is not positive on (0, 1]");
    }
    sol.eta_star = wetting_front(p, sol.coeffs);
    return sol;
}

double profile(const SeriesSolution& sol, double eta) {
    if (eta < 0.0)
        throw ValidationError("profile: eta must be >= 0");
    if (eta >= sol.eta_star)
        return 0.0;
    const double y = std::max(eval_y(sol.coeffs, 1.0 - eta / sol.eta_star), 0.0);
    return std::pow(sol.problem.m * sol.eta_star * sol.eta_star * y, 1.0 / sol.problem.m);
}

double profile_derivative_at_zero(const SeriesSolution& sol) {
    const double m = sol.problem.m;
    const double y1 = eval_y(sol.coeffs, 1.0);
    if (!(y1 > 0.0))
        throw ValidationError("profile_derivative_at_zero: y(1) must be positive");
    return -std::pow(sol.eta_star, 2.0 / m - 1.0) * std::pow(m * y1, 1.0 / m - 1.0) *
           eval_dy(sol.coeffs, 1.0);
}

double PerturbationSolution::y0(double z) const {
    return abc.A * z * z / 2.0 + abc.B * z;
}

double PerturbationSolution::y1(double z) const {
    const double A = abc.A, B = abc.B;
    const double r = 2.0 * B / A;
    const double inner =
        z * z / 2.0 - (B / A) * ((z + r) * (std::log(1.0 + z / r) - 1.0) + r);
    return -2.0 * (A + B) * inner;
}

double PerturbationSolution::operator()(double z) const {
    if (degenerate_A)
        return y0(z);
    return y0(z) + y1(z) / m;
}

PerturbationSolution make_perturbation(const ReducedODECoefficients& abc, double m) {
    if (!(m > 0.0))
        throw ValidationError("make_perturbation: m must be > 0");
    if (abc.A < 0.0)
        throw ValidationError("make_perturbation: A must be >= 0");
    return {abc, m, abc.A == 0.0};
}

double perturbation_y(const ReducedODECoefficients& abc, double m, double z) {
    if (z < 0.0 || z > 1.0)
        throw ValidationError("perturbation_y: z must be in [0, 1]");
    return make_perturbation(abc, m)(z);
}

double cumulative_moisture(const SeriesSolution& sol, double t, MoistureForm form) {
    if (!(t > 0.0))
        throw ValidationError("cumulative_moisture: t must be > 0");
    const double m = sol.problem.m;
    const double es = sol.eta_star;
    const double tf = std::pow(t, sol.exponents.a + sol.exponents.b);
    const double a1 = sol.coeffs[1];
    const double one_term = tf * (m * es / (1.0 + m)) * std::pow(m * es * es * a1, 1.0 / m);

    switch (form) {
    case MoistureForm::one_term:
        return one_term;
    case MoistureForm::two_term: {
        if (sol.coeffs.size() < 3)
            throw ValidationError("cumulative_moisture: two-term form needs a_2");
        const double ratio = sol.coeffs[2] / a1;
        return one_term * hyp2f1(1.0 + 1.0 / m, -1.0 / m, 2.0 + 1.0 / m, -ratio);
    }
    case MoistureForm::quadrature: {
        auto f = [&](double w) {
            // y(w)/w, the series with the leading power peeled off
            double q = 0.0;
            for (std::size_t i = sol.coeffs.size(); i-- > 1;)
                q = q * w + sol.coeffs[i];
            return std::pow(std::max(q, 0.0), 1.0 / m);
        };
        const double integral = numerics::integrate_jacobi(f, 1.0 / m, 1.0, {});
        return tf * es * std::pow(m * es * es, 1.0 / m) * integral;
    }
    }
    throw ValidationError("cumulative_moisture: unknown form");
}

double DimensionalModel::operator()(double x, double t) const {
    if (!(t > 0.0))
        throw ValidationError("DimensionalModel: t must be > 0");
    if (x < 0.0)
        throw ValidationError("DimensionalModel: x must be >= 0");
    const double ts = t / time_scale;
    return amplitude * std::pow(ts, sol.exponents.a) *
           profile(sol, (x / length) / std::pow(ts, sol.exponents.b));
}

DimensionalModel dimensionalize(const SeriesSolution& sol, const Scaling& scaling) {
    if (!(scaling.length > 0.0) || !(scaling.diffusivity > 0.0) || !(scaling.amplitude > 0.0))
        throw ValidationError("dimensionalize: scales must be positive");
    const double m = sol.problem.m;
    const double L = scaling.length;
    DimensionalModel model;
    model.sol = sol;
    model.length = L;
    if (sol.problem.bc == Boundary::concentration)
        model.amplitude = scaling.amplitude;
    else
        model.amplitude = std::pow(L * scaling.amplitude, 1.0 / (m + 1.0));
    model.time_scale = std::pow(
        L * L / (scaling.diffusivity * std::pow(model.amplitude, m)), 1.0 / sol.problem.alpha);
    return model;
}

} // namespace subflow::selfsim
