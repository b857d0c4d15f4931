#include "subflow/fd_solver.hpp"
#include "subflow/errors.hpp"
#include "subflow/special_functions.hpp"
#include "subflow/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace subflow::fd {

using numerics::gamma_fn;
using numerics::solve_tridiagonal;

void validate(const FDConfig& cfg) {
    if (cfg.nx < 16)
        throw ValidationError("FDConfig: nx must be >= 16");
    if (!(cfg.dx > 0.0))
        throw ValidationError("FDConfig: dx must be > 0");
    if (!(cfg.dt > 0.0))
        throw ValidationError("FDConfig: dt must be > 0");
    if (!(cfg.t_end > 0.0))
        throw ValidationError("FDConfig: t_end must be > 0");
    if (!(cfg.alpha > 0.0) || !(cfg.alpha <= 1.0))
        throw ValidationError("FDConfig: alpha must be in (0, 1]");
    if (!(cfg.m >= 0.0))
        throw ValidationError("FDConfig: m must be >= 0");
    if (!(cfg.theta >= 0.0) || !(cfg.theta <= 1.0))
        throw ValidationError("FDConfig: theta must be in [0, 1]");
}

std::vector<double> l1_weights(double alpha, int n) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw ValidationError("l1_weights: alpha must be in (0, 1]");
    if (n < 1)
        throw ValidationError("l1_weights: n must be >= 1");
    std::vector<double> b(n);
    const double e = 1.0 - alpha;
    for (int j = 0; j < n; ++j)
        b[j] = std::pow(j + 1.0, e) - std::pow(static_cast<double>(j), e);
    return b;
}

void advance(const FDConfig& cfg, FDField& field) {
    validate(cfg);
    if (field.history.empty())
        throw ValidationError("advance: field has no initial level");

    const int nx = cfg.nx;
    const int n = static_cast<int>(field.history.size()) - 1;
    const std::vector<double>& un = field.history.back();
    const double mu = std::pow(cfg.dt, -cfg.alpha) / gamma_fn(2.0 - cfg.alpha);
    const double theta = cfg.theta;
    const double idx2 = 1.0 / (cfg.dx * cfg.dx);

    // L1 memory term; drops out entirely in the classical limit
    std::vector<double> hist(nx, 0.0);
    if (cfg.alpha < 1.0 && n >= 1) {
        const std::vector<double> b = l1_weights(cfg.alpha, n + 1);
        for (int j = 1; j <= n; ++j) {
            const std::vector<double>& uh = field.history[n + 1 - j];
            const std::vector<double>& ul = field.history[n - j];
            const double bj = b[j];
            for (int i = 0; i < nx; ++i)
                hist[i] += bj * (uh[i] - ul[i]);
        }
    }

    // face diffusivities frozen at the previous level
    std::vector<double> face(nx - 1);
    for (int i = 0; i < nx - 1; ++i)
        face[i] = cfg.m == 0.0
                      ? 1.0
                      : 0.5 * (std::pow(un[i], cfg.m) + std::pow(un[i + 1], cfg.m));

    const bool conc = cfg.bc == selfsim::Boundary::concentration;
    const int first = conc ? 1 : 0;            // first unknown node
    const int n_unknown = (nx - 1) - first;    // far node held at 0
    std::vector<double> lower(n_unknown - 1), diag(n_unknown), upper(n_unknown - 1),
        rhs(n_unknown);

    for (int r = 0; r < n_unknown; ++r) {
        const int i = first + r;
        if (!conc && i == 0) {
            // finite-volume half cell at the inflow face: exact discrete
            // mass balance against the imposed unit flux
            diag[r] = mu + theta * 2.0 * face[0] * idx2;
            upper[r] = -theta * 2.0 * face[0] * idx2;
            rhs[r] = mu * (un[0] - hist[0]) +
                     (1.0 - theta) * 2.0 * face[0] * (un[1] - un[0]) * idx2 + 2.0 / cfg.dx;
            continue;
        }
        const double dl = face[i - 1], dr = face[i];
        diag[r] = mu + theta * (dl + dr) * idx2;
        if (r > 0)
            lower[r - 1] = -theta * dl * idx2;
        if (r < n_unknown - 1)
            upper[r] = -theta * dr * idx2;
        const double li = (dr * (un[i + 1] - un[i]) - dl * (un[i] - un[i - 1])) * idx2;
        rhs[r] = mu * (un[i] - hist[i]) + (1.0 - theta) * li;
        if (conc && i == 1)
            rhs[r] += theta * dl * idx2; // Dirichlet u_0 = 1 folded in
    }

    std::vector<double> sol = solve_tridiagonal(lower, diag, upper, rhs);

    std::vector<double> next(nx, 0.0);
    if (conc)
        next[0] = 1.0;
    for (int r = 0; r < n_unknown; ++r) {
        double v = sol[r];
        if (v < 0.0) {
            ++field.clamp_count;
            field.clamped_mass += -v * cfg.dx;
            v = 0.0;
        }
        next[first + r] = v;
    }
    field.history.push_back(std::move(next));
    field.times.push_back((n + 1) * cfg.dt);
}

FDField run(const FDConfig& cfg) {
    validate(cfg);
    FDField field;
    field.history.assign(1, std::vector<double>(cfg.nx, 0.0));
    field.times.assign(1, 0.0);

    const int nsteps = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (int s = 0; s < nsteps; ++s) {
        advance(cfg, field);
        const std::vector<double>& u = field.history.back();
        if (std::abs(u[cfg.nx - 2]) > 1e-8)
            throw FrontReachedBoundaryError("run: moisture front reached the far boundary");
        double total = 0.0;
        for (int i = 0; i < cfg.nx - 1; ++i)
            total += 0.5 * (u[i] + u[i + 1]) * cfg.dx;
        if (field.clamped_mass > 1e-6 * std::max(total, 1e-300))
            throw SchemeQualityError("run: clamped negative mass exceeded budget");
    }
    return field;
}

namespace {

int level_of_time(const FDField& field, double t) {
    for (std::size_t i = 0; i < field.times.size(); ++i)
        if (std::abs(field.times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
            return static_cast<int>(i);
    throw ValidationError("collapse_diagnostic: time " + std::to_string(t) + " not stored");
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    std::size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
    return ys[hi - 1] * (1.0 - w) + ys[hi] * w;
}

} // namespace

double collapse_diagnostic(const FDField& field, const FDConfig& cfg,
                           const selfsim::SimilarityExponents& exps,
                           const std::vector<double>& times) {
    if (times.size() < 2)
        throw ValidationError("collapse_diagnostic: need at least 2 times");
    for (double t : times)
        if (!(t > 0.0))
            throw ValidationError("collapse_diagnostic: times must be > 0");

    const int nx = cfg.nx;
    std::vector<std::vector<double>> eta(times.size()), v(times.size());
    double eta_max = 1e300;
    for (std::size_t s = 0; s < times.size(); ++s) {
        const double t = times[s];
        const int lvl = level_of_time(field, t);
        const double ts_b = std::pow(t, -exps.b), ts_a = std::pow(t, -exps.a);
        eta[s].resize(nx);
        v[s].resize(nx);
        for (int i = 0; i < nx; ++i) {
            eta[s][i] = i * cfg.dx * ts_b;
            v[s][i] = field.history[lvl][i] * ts_a;
        }
        eta_max = std::min(eta_max, eta[s].back());
    }

    const int grid = 512;
    double worst = 0.0;
    for (std::size_t s1 = 0; s1 < times.size(); ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < times.size(); ++s2) {
            for (int j = 0; j <= grid; ++j) {
                const double e = eta_max * j / grid;
                worst = std::max(worst, std::abs(interp(eta[s1], v[s1], e) -
                                                 interp(eta[s2], v[s2], e)));
            }
        }
    }
    return worst;
}

std::vector<std::pair<double, double>> wetting_front_numeric(const FDField& field,
                                                             const FDConfig& cfg,
                                                             double threshold) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t lvl = 0; lvl < field.history.size(); ++lvl) {
        const std::vector<double>& u = field.history[lvl];
        const double umax = *std::max_element(u.begin(), u.end());
        const double thr = threshold > 0.0 ? threshold : 1e-3 * umax;
        double x_front = 0.0;
        if (umax > thr) {
            for (int i = cfg.nx - 2; i >= 0; --i) {
                if (u[i] > thr) {
                    const double drop = u[i] - u[i + 1];
                    const double frac = drop > 0.0 ? (u[i] - thr) / drop : 0.0;
                    x_front = (i + std::min(frac, 1.0)) * cfg.dx;
                    break;
                }
            }
        }
        out.emplace_back(field.times[lvl], x_front);
    }
    return out;
}

std::vector<double> cumulative_moisture_numeric(const FDField& field, const FDConfig& cfg) {
    std::vector<double> out;
    out.reserve(field.history.size());
    for (const auto& u : field.history) {
        double total = 0.0;
        for (int i = 0; i < cfg.nx - 1; ++i)
            total += 0.5 * (u[i] + u[i + 1]) * cfg.dx;
        out.push_back(total);
    }
    return out;
}

} // namespace subflow::fd
