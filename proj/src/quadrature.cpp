#include "subflow/quadrature.hpp"
#include "subflow/errors.hpp"
#include "subflow/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subflow::numerics {

void validate(const QuadratureSpec& spec) {
    if (spec.order < 2)
        throw ValidationError("QuadratureSpec: order must be >= 2");
    if (!(spec.rel_tol > 0.0))
        throw ValidationError("QuadratureSpec: rel_tol must be > 0");
}

namespace {

// Symmetric tridiagonal QL with implicit shifts, accumulating only the first
// row of the eigenvector matrix (all that Gauss weights need). d: diagonal,
// e: subdiagonal (size n-1), z: starts as the first unit vector.
void tridiag_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                             std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    const double eps = 2.3e-16;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            while (m < n - 1 && std::abs(e[m]) > eps * (std::abs(d[m]) + std::abs(d[m + 1])))
                ++m;
            if (m == l)
                break;
            if (++iter > 50)
                throw ToleranceError("tridiag_eigen_first_row: QL did not converge", std::abs(e[l]));
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

double log_beta(double p, double q) {
    return static_cast<double>(lgammal(static_cast<long double>(p)) +
                               lgammal(static_cast<long double>(q)) -
                               lgammal(static_cast<long double>(p) + static_cast<long double>(q)));
}

struct SimpsonState {
    const std::function<double(double)>* f;
    double err_accum = 0.0;
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double fl = (*st.f)(lm), fr = (*st.f)(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= 48) {
        if (depth >= 48 && std::abs(delta) > 15.0 * tol)
            st.err_accum += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(st, a, m, fa, fl, fm, left, 0.5 * tol, depth + 1) +
           simpson_recurse(st, m, b, fm, fr, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

QuadratureRule jacobi_rule(int order, double beta, double gamma) {
    if (order < 2)
        throw ValidationError("jacobi_rule: order must be >= 2");
    if (!(beta > -1.0))
        throw ValidationError("jacobi_rule: beta must be > -1");
    if (!(gamma > 0.0))
        throw ValidationError("jacobi_rule: gamma must be > 0");

    // Standard-interval Jacobi weight (1-x)^a (1+x)^b with a = gamma-1, b = beta.
    const double a = gamma - 1.0, b = beta;
    const int n = order;
    std::vector<double> d(n), e(n - 1), z(n, 0.0);
    z[0] = 1.0;
    const double ab = a + b;
    d[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k)
        d[k] = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    if (n > 1)
        e[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
    for (int k = 2; k < n; ++k) {
        const double t = 2.0 * k + ab;
        e[k - 1] = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + ab) /
                             (t * t * (t + 1.0) * (t - 1.0)));
    }

    tridiag_eigen_first_row(d, e, z);

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });

    // Total mass on [0,1] is Beta(beta+1, gamma); the 2-powers from the
    // interval map cancel against mu_0 = 2^{a+b+1} B(a+1, b+1) exactly.
    const double mass = std::exp(log_beta(beta + 1.0, gamma));
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (d[idx[i]] + 1.0);
        rule.weights[i] = mass * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

double integrate_jacobi(const std::function<double(double)>& f, double beta, double gamma,
                        const QuadratureSpec& spec) {
    validate(spec);
    if (spec.kind == QuadratureKind::jacobi_weighted) {
        const QuadratureRule rule = jacobi_rule(spec.order, beta, gamma);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(rule.nodes[i]);
        return sum;
    }

    if (!(beta > -1.0))
        throw ValidationError("integrate_jacobi: beta must be > -1");
    if (!(gamma > 0.0))
        throw ValidationError("integrate_jacobi: gamma must be > 0");

    // Split at 1/2 and absorb each endpoint singularity by substitution:
    // right half w = (1-z)^gamma, left half v = z^(beta+1); both integrands
    // are then bounded and adaptive Simpson applies.
    const double inv_g = 1.0 / gamma;
    auto right = [&](double w) {
        const double zc = 1.0 - std::pow(w, inv_g);
        return std::pow(zc, beta) * f(zc);
    };
    const double inv_b1 = 1.0 / (beta + 1.0);
    auto left = [&](double v) {
        const double zc = std::pow(v, inv_b1);
        return std::pow(1.0 - zc, gamma - 1.0) * f(zc);
    };
    const double ir = adaptive_simpson(right, 0.0, std::pow(0.5, gamma), spec.rel_tol) * inv_g;
    const double il = adaptive_simpson(left, 0.0, std::pow(0.5, beta + 1.0), spec.rel_tol) * inv_b1;
    return il + ir;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(rel_tol > 0.0))
        throw ValidationError("adaptive_simpson: rel_tol must be > 0");
    if (a == b)
        return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::abs(whole), 1e-300);
    SimpsonState st{&f, 0.0};
    const double result =
        simpson_recurse(st, a, b, fa, fm, fb, whole, rel_tol * scale, 0);
    const double achieved = st.err_accum / std::max(std::abs(result), 1e-300);
    if (achieved > rel_tol)
        throw ToleranceError("adaptive_simpson: tolerance not reached", achieved);
    return result;
}

} // namespace subflow::numerics
