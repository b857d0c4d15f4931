#include "subflow/fitting.hpp"
#include "subflow/errors.hpp"
#include "subflow/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace subflow::fitting {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, int lineno) {
    const std::string t = trim(s);
    if (t.empty())
        throw ParseError("empty numeric field", lineno);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ParseError("malformed number '" + t + "'", lineno);
    return v;
}

} // namespace

MoistureProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("load_profile: cannot open " + path);

    MoistureProfile profile;
    profile.time = 1.0;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t[0] == '#') {
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                continue;
            const std::string key = trim(t.substr(1, eq - 1));
            const std::string val = trim(t.substr(eq + 1));
            if (key == "time")
                profile.time = parse_double(val, lineno);
            else if (key == "amplitude")
                profile.amplitude = parse_double(val, lineno);
            else if (key == "bc") {
                if (val == "concentration")
                    profile.bc = selfsim::Boundary::concentration;
                else if (val == "flux")
                    profile.bc = selfsim::Boundary::flux;
                else
                    throw ParseError("unknown bc '" + val + "'", lineno);
            } else if (key == "x_unit")
                profile.x_unit = val;
            else if (key == "u_unit")
                profile.u_unit = val;
            continue;
        }
        if (!header_seen) {
            std::string compact;
            for (char ch : t)
                if (ch != ' ' && ch != '\t')
                    compact += ch;
            if (compact != "x,u")
                throw ParseError("expected header 'x,u'", lineno);
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected two comma-separated fields", lineno);
        profile.x.push_back(parse_double(t.substr(0, comma), lineno));
        profile.u.push_back(parse_double(t.substr(comma + 1), lineno));
    }
    if (!header_seen)
        throw ParseError("missing 'x,u' header", lineno);

    if (!(profile.time > 0.0))
        throw ValidationError("load_profile: time must be > 0");
    if (!(profile.amplitude > 0.0))
        throw ValidationError("load_profile: amplitude must be > 0");
    for (double v : profile.u)
        if (v < 0.0)
            throw ValidationError("load_profile: u must be non-negative");
    for (double v : profile.x)
        if (v < 0.0)
            throw ValidationError("load_profile: x must be non-negative");

    std::vector<std::size_t> idx(profile.x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return profile.x[a] < profile.x[b]; });
    std::vector<double> xs, us;
    xs.reserve(idx.size());
    us.reserve(idx.size());
    for (std::size_t i : idx) {
        xs.push_back(profile.x[i]);
        us.push_back(profile.u[i]);
    }
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] == xs[i - 1])
            throw ValidationError("load_profile: duplicate x value " + std::to_string(xs[i]));
    profile.x = std::move(xs);
    profile.u = std::move(us);
    return profile;
}

double objective(const MoistureProfile& profile, const FitParams& params, int n_terms,
                 int* error_count) {
    try {
        selfsim::SimilarityProblem problem{params.alpha, params.m, profile.bc};
        const selfsim::SeriesSolution sol = selfsim::solve_series(problem, n_terms);
        selfsim::Scaling scaling;
        scaling.length = 1.0;
        scaling.diffusivity = params.D0;
        scaling.amplitude = profile.amplitude;
        const selfsim::DimensionalModel model = selfsim::dimensionalize(sol, scaling);
        double sse = 0.0;
        for (std::size_t i = 0; i < profile.x.size(); ++i) {
            const double r = model(profile.x[i], profile.time) - profile.u[i];
            sse += r * r;
        }
        if (!std::isfinite(sse))
            throw ValidationError("objective: non-finite residual");
        return sse;
    } catch (const std::exception&) {
        if (error_count)
            ++*error_count;
        return std::numeric_limits<double>::infinity();
    }
}

namespace {

constexpr double alpha_lo = 0.05, alpha_hi = 1.0;
constexpr double d0_lo = 1e-6, d0_hi = 1e6;
constexpr double m_lo = 0.1, m_hi = 10.0;

double box_penalty(double v, double lo, double hi, double width) {
    const double d = v < lo ? (lo - v) : (v > hi ? v - hi : 0.0);
    const double r = d / width;
    return r * r;
}

// Rough diffusivity scale putting the model front near the data front.
double d0_heuristic(const MoistureProfile& profile, double alpha, double m) {
    double x_front = profile.x.back();
    const double umax = *std::max_element(profile.u.begin(), profile.u.end());
    for (std::size_t i = profile.x.size(); i-- > 0;) {
        if (profile.u[i] > 0.02 * umax) {
            x_front = profile.x[i];
            break;
        }
    }
    x_front = std::max(x_front, 1e-6);
    return std::clamp(x_front * x_front /
                          (std::pow(profile.time, alpha) * std::pow(profile.amplitude, m)),
                      d0_lo, d0_hi);
}

} // namespace

FitResult fit(const MoistureProfile& profile, const FitOptions& options) {
    if (profile.x.size() < 5)
        throw FitError("fit: need at least 5 samples");
    const double umax = *std::max_element(profile.u.begin(), profile.u.end());
    if (!(umax > 0.0))
        throw FitError("fit: all-zero profile is degenerate");
    if (options.fix_m && !(*options.fix_m > 0.0))
        throw FitError("fit: fixed m must be > 0");

    const bool free_m = !options.fix_m.has_value();
    const double scale = std::max(
        std::inner_product(profile.u.begin(), profile.u.end(), profile.u.begin(), 0.0), 1e-300);

    int solver_errors = 0;
    auto penalized = [&](double alpha, double d0, double m) {
        double pen = box_penalty(alpha, alpha_lo, alpha_hi, alpha_hi - alpha_lo) +
                     box_penalty(d0, d0_lo, d0_hi, 1.0) + box_penalty(m, m_lo, m_hi, 1.0);
        const FitParams clamped{std::clamp(alpha, alpha_lo, alpha_hi),
                                std::clamp(d0, d0_lo, d0_hi), std::clamp(m, m_lo, m_hi)};
        return objective(profile, clamped, options.n_terms, &solver_errors) +
               1e4 * scale * pen;
    };

    // Minimize in (alpha, ln D0[, ln m]); the log keeps the decades of D0
    // equally weighted and positivity automatic.
    auto unpack = [&](const std::vector<double>& p) {
        const double alpha = p[0];
        const double d0 = std::exp(p[1]);
        const double m = free_m ? std::exp(p[2]) : *options.fix_m;
        return FitParams{alpha, d0, m};
    };
    auto nm_objective = [&](const std::vector<double>& p) {
        const FitParams q = unpack(p);
        return penalized(q.alpha, q.D0, q.m);
    };

    std::vector<std::vector<double>> starts;
    if (options.start) {
        std::vector<double> start{options.start->alpha, std::log(options.start->D0)};
        if (free_m)
            start.push_back(std::log(options.start->m));
        starts.push_back(std::move(start));
    } else {
        // Rank the alpha grid by its best diffusivity before descending: the
        // profile-vs-alpha landscape can be bimodal, so the two best-valued
        // seeds both get a full simplex run.
        const double m0 = free_m ? 1.0 : *options.fix_m;
        struct Seed {
            double val, alpha, ld0;
        };
        std::vector<Seed> seeds;
        for (double ag = 0.15; ag < 1.0; ag += 0.1) {
            const double base_ld0 = std::log(d0_heuristic(profile, ag, m0));
            Seed s{penalized(ag, std::exp(base_ld0), m0), ag, base_ld0};
            for (double dl = -2.0; dl <= 2.0; dl += 0.5) {
                const double val = penalized(ag, std::exp(base_ld0 + dl), m0);
                if (val < s.val) {
                    s.val = val;
                    s.ld0 = base_ld0 + dl;
                }
            }
            seeds.push_back(s);
        }
        std::sort(seeds.begin(), seeds.end(),
                  [](const Seed& a, const Seed& b) { return a.val < b.val; });
        for (std::size_t i = 0; i < seeds.size() && i < 2; ++i) {
            std::vector<double> start{seeds[i].alpha, seeds[i].ld0};
            if (free_m)
                start.push_back(std::log(m0));
            starts.push_back(std::move(start));
        }
    }

    numerics::MinimizeResult res;
    int total_iterations = 0;
    for (const std::vector<double>& start : starts) {
        numerics::MinimizeResult r =
            numerics::minimize_derivative_free(nm_objective, start, options.tol, options.max_iter);
        total_iterations += r.iterations;
        if (res.x.empty() || r.value < res.value)
            res = std::move(r);
    }
    res.iterations = total_iterations;

    const FitParams best = unpack(res.x);
    FitResult out;
    out.alpha = std::clamp(best.alpha, alpha_lo, alpha_hi);
    out.D0 = std::clamp(best.D0, d0_lo, d0_hi);
    out.m = std::clamp(best.m, m_lo, m_hi);
    out.sse = objective(profile, {out.alpha, out.D0, out.m}, options.n_terms, nullptr);
    out.iterations = res.iterations;
    out.converged = res.converged;
    out.solver_errors = solver_errors;
    return out;
}

double scaling_exponent_probe(const std::vector<MoistureProfile>& profiles, double level) {
    if (profiles.size() < 3)
        throw ValidationError("scaling_exponent_probe: need at least 3 profiles");
    if (!(level > 0.0) || !(level < 1.0))
        throw ValidationError("scaling_exponent_probe: level must be in (0, 1)");

    std::vector<double> log_t, log_x;
    for (const MoistureProfile& p : profiles) {
        if (p.x.size() < 2)
            throw ValidationError("scaling_exponent_probe: profile too short");
        const double umax = *std::max_element(p.u.begin(), p.u.end());
        if (!(umax > 0.0))
            throw ValidationError("scaling_exponent_probe: zero profile");
        const double thr = level * umax;
        if (p.u.back() >= thr)
            throw ValidationError("scaling_exponent_probe: level not crossed within data");
        double xl = -1.0;
        for (std::size_t i = p.x.size() - 1; i-- > 0;) {
            if (p.u[i] >= thr) {
                const double drop = p.u[i] - p.u[i + 1];
                const double frac = drop > 0.0 ? (p.u[i] - thr) / drop : 0.0;
                xl = p.x[i] + frac * (p.x[i + 1] - p.x[i]);
                break;
            }
        }
        if (!(xl > 0.0))
            throw ValidationError("scaling_exponent_probe: level crossing at x <= 0");
        log_t.push_back(std::log(p.time));
        log_x.push_back(std::log(xl));
    }
    for (std::size_t i = 0; i < log_t.size(); ++i)
        for (std::size_t j = i + 1; j < log_t.size(); ++j)
            if (log_t[i] == log_t[j])
                throw ValidationError("scaling_exponent_probe: times must be distinct");

    const double n = static_cast<double>(log_t.size());
    const double mt = std::accumulate(log_t.begin(), log_t.end(), 0.0) / n;
    const double mx = std::accumulate(log_x.begin(), log_x.end(), 0.0) / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < log_t.size(); ++i) {
        num += (log_t[i] - mt) * (log_x[i] - mx);
        den += (log_t[i] - mt) * (log_t[i] - mt);
    }
    return num / den;
}

} // namespace subflow::fitting
