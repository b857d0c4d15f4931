#include "subflow/nelder_mead.hpp"
#include "subflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subflow::numerics {

namespace {

using Point = std::vector<double>;

double diameter(const std::vector<Point>& simplex) {
    double d = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
        for (std::size_t j = 0; j < simplex[i].size(); ++j)
            d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
    return d;
}

struct Run {
    Point best_x;
    double best_f;
    int evals;
    bool converged;
};

Run nelder_mead_once(const std::function<double(const Point&)>& objective, const Point& start,
                     double step, double tol, int eval_budget) {
    const std::size_t n = start.size();
    std::vector<Point> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i)
        simplex[i + 1][i] += (start[i] != 0.0) ? step * std::abs(start[i]) : step;

    int evals = 0;
    std::vector<double> fvals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fvals[i] = objective(simplex[i]);
        ++evals;
    }

    bool converged = false;
    while (evals < eval_budget) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        std::vector<Point> sorted(n + 1);
        std::vector<double> fsorted(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sorted[i] = simplex[order[i]];
            fsorted[i] = fvals[order[i]];
        }
        simplex = std::move(sorted);
        fvals = std::move(fsorted);

        if (diameter(simplex) < tol) {
            converged = true;
            break;
        }

        Point centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                centroid[j] += simplex[i][j] / static_cast<double>(n);

        auto blend = [&](double coef) {
            Point p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
            return p;
        };

        const Point refl = blend(-1.0);
        const double f_refl = objective(refl);
        ++evals;

        if (f_refl < fvals[0]) {
            const Point expa = blend(-2.0);
            const double f_expa = objective(expa);
            ++evals;
            if (f_expa < f_refl) {
                simplex[n] = expa;
                fvals[n] = f_expa;
            } else {
                simplex[n] = refl;
                fvals[n] = f_refl;
            }
            continue;
        }
        if (f_refl < fvals[n - 1]) {
            simplex[n] = refl;
            fvals[n] = f_refl;
            continue;
        }

        const bool outside = f_refl < fvals[n];
        const Point contr = blend(outside ? -0.5 : 0.5);
        const double f_contr = objective(contr);
        ++evals;
        if (f_contr < std::min(f_refl, fvals[n])) {
            simplex[n] = contr;
            fvals[n] = f_contr;
            continue;
        }

        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            fvals[i] = objective(simplex[i]);
            ++evals;
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fvals[i] < fvals[best])
            best = i;
    return {simplex[best], fvals[best], evals, converged};
}

} // namespace

MinimizeResult minimize_derivative_free(const std::function<double(const Point&)>& objective,
                                        const Point& start, double tol, int max_iter) {
    if (start.empty())
        throw ValidationError("minimize_derivative_free: empty start point");
    if (!(tol > 0.0))
        throw ValidationError("minimize_derivative_free: tol must be > 0");
    if (max_iter < 1)
        throw ValidationError("minimize_derivative_free: max_iter must be >= 1");

    Run first = nelder_mead_once(objective, start, 0.05, tol, max_iter);
    MinimizeResult out;
    out.x = first.best_x;
    out.value = first.best_f;
    out.iterations = first.evals;
    out.converged = first.converged;
    if (first.evals >= max_iter)
        return out;

    // One restart from the best point with a smaller simplex; polishes the
    // narrow-valley cases where the first simplex collapses prematurely.
    Run second =
        nelder_mead_once(objective, first.best_x, 0.005, tol, max_iter - first.evals);
    out.iterations += second.evals;
    if (second.best_f < out.value) {
        out.x = second.best_x;
        out.value = second.best_f;
    }
    out.converged = first.converged && second.converged;
    return out;
}

} // namespace subflow::numerics
