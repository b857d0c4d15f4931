// Command-line front end: self-similar approximants, the reference FD
// solver, operator-expansion error tables, profile fitting, and collapse
// diagnostics. All outputs are deterministic plot-ready CSV/JSON.

#include "subflow/csv_io.hpp"
#include "subflow/ek_operator.hpp"
#include "subflow/errors.hpp"
#include "subflow/fd_solver.hpp"
#include "subflow/fitting.hpp"
#include "subflow/selfsim.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using subflow::ValidationError;
using subflow::io::format_g17;
using subflow::io::Metadata;
namespace selfsim = subflow::selfsim;
namespace fd = subflow::fd;
namespace ek = subflow::ek;
namespace fitting = subflow::fitting;

namespace {

selfsim::Boundary parse_bc(const std::string& s) {
    if (s == "concentration")
        return selfsim::Boundary::concentration;
    if (s == "flux")
        return selfsim::Boundary::flux;
    throw ValidationError("bc must be 'concentration' or 'flux', got '" + s + "'");
}

// similarity exponents with m = 0 admitted (linear-diffusion oracle runs)
selfsim::SimilarityExponents exps_any_m(double alpha, double m, selfsim::Boundary bc) {
    if (bc == selfsim::Boundary::concentration)
        return {0.0, alpha / 2.0};
    return {alpha / (m + 2.0), alpha * (m + 1.0) / (m + 2.0)};
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open output file " + (dir / name).string());
    return out;
}

double interp_xy(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    const std::size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
    return ys[hi - 1] * (1.0 - w) + ys[hi] * w;
}

// ---------------------------------------------------------------- selfsim

struct SelfsimArgs {
    double alpha = 0.5, m = 1.0;
    std::string bc = "concentration";
    int n_terms = 3;
    int eta_points = 201;
    double t_min = 0.1, t_max = 1.0;
    int t_points = 25;
    std::string out = ".";
};

void run_selfsim(const SelfsimArgs& a) {
    if (a.eta_points < 2)
        throw ValidationError("eta-points must be >= 2");
    if (a.t_points < 1)
        throw ValidationError("t-points must be >= 1");
    if (!(a.t_min > 0.0) || !(a.t_max >= a.t_min))
        throw ValidationError("need 0 < t-min <= t-max");
    const selfsim::SimilarityProblem problem{a.alpha, a.m, parse_bc(a.bc)};
    const selfsim::SeriesSolution sol = selfsim::solve_series(problem, a.n_terms);

    const Metadata meta = {
        {"command", "selfsim"},         {"alpha", format_g17(a.alpha)},
        {"m", format_g17(a.m)},         {"bc", a.bc},
        {"n_terms", std::to_string(a.n_terms)}, {"eta_star", format_g17(sol.eta_star)},
    };

    {
        std::vector<double> eta(a.eta_points), u(a.eta_points);
        for (int i = 0; i < a.eta_points; ++i) {
            eta[i] = sol.eta_star * i / (a.eta_points - 1);
            u[i] = selfsim::profile(sol, eta[i]);
        }
        auto f = open_out(a.out, "profile.csv");
        subflow::io::write_csv(f, meta, {"eta", "U"}, {eta, u});
    }
    {
        std::vector<double> ts(a.t_points), is(a.t_points);
        for (int i = 0; i < a.t_points; ++i) {
            ts[i] = a.t_points == 1
                        ? a.t_min
                        : a.t_min + (a.t_max - a.t_min) * i / (a.t_points - 1);
            is[i] = selfsim::cumulative_moisture(sol, ts[i]);
        }
        Metadata mm = meta;
        mm.emplace_back("t_min", format_g17(a.t_min));
        mm.emplace_back("t_max", format_g17(a.t_max));
        auto f = open_out(a.out, "moisture.csv");
        subflow::io::write_csv(f, mm, {"t", "I"}, {ts, is});
    }
    {
        json doc;
        doc["config"] = {{"command", "selfsim"}, {"alpha", a.alpha},     {"m", a.m},
                         {"bc", a.bc},           {"n_terms", a.n_terms}};
        doc["a"] = sol.exponents.a;
        doc["b"] = sol.exponents.b;
        doc["A"] = sol.abc.A;
        doc["B"] = sol.abc.B;
        doc["coefficients"] = sol.coeffs;
        doc["eta_star"] = sol.eta_star;
        doc["dU_deta_at_0"] = selfsim::profile_derivative_at_zero(sol);
        auto f = open_out(a.out, "solution.json");
        f << doc.dump(2) << "\n";
    }
}

// --------------------------------------------------------------------- fd

struct FdArgs {
    double alpha = 1.0, m = 0.0;
    int nx = 400;
    double dx = 0.0125, dt = 1e-3, t_end = 0.25, theta = 1.0;
    std::string bc = "concentration";
    std::vector<double> times;
    std::string out = ".";
};

void run_fd(const FdArgs& a) {
    fd::FDConfig cfg{a.nx, a.dx, a.dt, a.t_end, a.alpha, a.m, parse_bc(a.bc), a.theta};
    fd::validate(cfg);
    std::vector<double> requested = a.times;
    if (requested.empty())
        for (double f : {0.2, 0.4, 0.6, 0.8, 1.0})
            requested.push_back(f * a.t_end);
    if (requested.size() < 2)
        throw ValidationError("need at least 2 snapshot times");

    const fd::FDField field = fd::run(cfg);

    std::vector<double> snap;
    for (double t : requested) {
        const long idx = std::lround(t / a.dt);
        if (idx < 1 || idx >= static_cast<long>(field.times.size()))
            throw ValidationError("snapshot time " + format_g17(t) + " outside the run");
        snap.push_back(field.times[idx]);
    }

    Metadata meta = {
        {"command", "fd"},         {"alpha", format_g17(a.alpha)},
        {"m", format_g17(a.m)},    {"bc", a.bc},
        {"nx", std::to_string(a.nx)}, {"dx", format_g17(a.dx)},
        {"dt", format_g17(a.dt)},  {"t_end", format_g17(a.t_end)},
        {"theta", format_g17(a.theta)},
        {"clamp_count", std::to_string(field.clamp_count)},
    };

    {
        std::vector<double> ct, cx, cu;
        for (double t : snap) {
            const long idx = std::lround(t / a.dt);
            for (int i = 0; i < a.nx; ++i) {
                ct.push_back(t);
                cx.push_back(i * a.dx);
                cu.push_back(field.history[idx][i]);
            }
        }
        auto f = open_out(a.out, "history.csv");
        subflow::io::write_csv(f, meta, {"t", "x", "u"}, {ct, cx, cu});
    }
    {
        const auto front = fd::wetting_front_numeric(field, cfg);
        std::vector<double> ft, fx;
        for (const auto& [t, x] : front) {
            ft.push_back(t);
            fx.push_back(x);
        }
        auto f = open_out(a.out, "front.csv");
        subflow::io::write_csv(f, meta, {"t", "x_front"}, {ft, fx});
    }
    {
        const auto moist = fd::cumulative_moisture_numeric(field, cfg);
        std::vector<double> it(field.times.begin(), field.times.end());
        auto f = open_out(a.out, "infiltration.csv");
        subflow::io::write_csv(f, meta, {"t", "I"}, {it, moist});
    }
    {
        const auto exps = exps_any_m(a.alpha, a.m, cfg.bc);
        const double value = fd::collapse_diagnostic(field, cfg, exps, snap);
        auto f = open_out(a.out, "collapse.txt");
        for (const auto& [k, v] : meta)
            f << "# " << k << "=" << v << "\n";
        f << "# a=" << format_g17(exps.a) << "\n";
        f << "# b=" << format_g17(exps.b) << "\n";
        f << "collapse_sup_distance=" << format_g17(value) << "\n";
    }
}

// --------------------------------------------------------------- ek-error

struct EkArgs {
    double beta = 1.0, gamma = 0.1, delta = 1.0;
    std::string profile = "exp-decay";
    std::vector<int> n_list;
    double eta_max = 2.0;
    int points = 101;
    std::string out = ".";
};

void run_ek_error(const EkArgs& a) {
    const ek::EKParams p{a.beta, a.gamma, a.delta};
    ek::validate(p);
    if (a.n_list.empty())
        throw ValidationError("n-list must not be empty");
    for (int n : a.n_list)
        if (n < 1)
            throw ValidationError("n-list entries must be >= 1");
    if (a.points < 2)
        throw ValidationError("points must be >= 2");
    if (!(a.eta_max > 0.0))
        throw ValidationError("eta-max must be > 0");

    ek::ProfileFunction U;
    if (a.profile == "exp-decay")
        U = ek::exp_decay_profile();
    else if (a.profile == "sqrt-support")
        U = ek::sqrt_support_profile();
    else
        throw ValidationError("unknown test function '" + a.profile + "'");

    const bool has_series_bound = a.delta > 0.0;
    std::vector<std::string> header = {"eta", "direct"};
    for (int n : a.n_list) {
        header.push_back("series_" + std::to_string(n));
        header.push_back("rel_err_" + std::to_string(n));
    }
    if (has_series_bound)
        for (int n : a.n_list)
            header.push_back("bound_" + std::to_string(n));
    else
        header.push_back("bound_one_term");

    std::vector<std::vector<double>> cols(header.size());
    for (int i = 0; i < a.points; ++i) {
        const double eta = a.eta_max * i / (a.points - 1);
        const double direct = ek::ek_apply_direct(U, eta, p);
        std::size_t c = 0;
        cols[c++].push_back(eta);
        cols[c++].push_back(direct);
        for (int n : a.n_list) {
            const double s = ek::ek_apply_series(U, eta, p, n);
            cols[c++].push_back(s);
            double rel;
            if (direct == 0.0)
                rel = (s == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
            else
                rel = std::abs(direct - s) / std::abs(direct);
            cols[c++].push_back(rel);
        }
        if (has_series_bound) {
            for (int n : a.n_list) {
                double norm = 0.0;
                for (int j = 0; j <= 256; ++j)
                    norm = std::max(norm, std::abs(U.deriv_k(eta * j / 256.0, n)));
                cols[c++].push_back(ek::ek_series_error_bound(norm, eta, p, n));
            }
        } else {
            cols[c++].push_back(ek::ek_one_term_error_bound(U, eta, p));
        }
    }

    const Metadata meta = {
        {"command", "ek-error"},      {"beta", format_g17(a.beta)},
        {"gamma", format_g17(a.gamma)}, {"delta", format_g17(a.delta)},
        {"profile", a.profile},       {"eta_max", format_g17(a.eta_max)},
        {"points", std::to_string(a.points)},
    };
    auto f = open_out(a.out, "ek_error.csv");
    subflow::io::write_csv(f, meta, header, cols);
}

// -------------------------------------------------------------------- fit

struct FitArgs {
    std::string input;
    double fix_m = 1.0;
    int n_terms = 3;
    std::string out = ".";
};

void run_fit(const FitArgs& a, bool has_fix_m) {
    const fitting::MoistureProfile profile = fitting::load_profile(a.input);
    fitting::FitOptions options;
    options.n_terms = a.n_terms;
    if (has_fix_m)
        options.fix_m = a.fix_m;
    const fitting::FitResult res = fitting::fit(profile, options);

    json doc;
    doc["config"] = {{"command", "fit"},
                     {"input", a.input},
                     {"n_terms", a.n_terms},
                     {"fix_m", has_fix_m ? json(a.fix_m) : json()}};
    doc["alpha"] = res.alpha;
    doc["D0"] = res.D0;
    doc["m"] = res.m;
    doc["sse"] = res.sse;
    doc["iterations"] = res.iterations;
    doc["converged"] = res.converged;
    doc["solver_errors"] = res.solver_errors;
    {
        auto f = open_out(a.out, "fit.json");
        f << doc.dump(2) << "\n";
    }
    {
        const selfsim::SimilarityProblem problem{res.alpha, res.m, profile.bc};
        const selfsim::SeriesSolution sol = selfsim::solve_series(problem, a.n_terms);
        selfsim::Scaling scaling;
        scaling.diffusivity = res.D0;
        scaling.amplitude = profile.amplitude;
        const selfsim::DimensionalModel model = selfsim::dimensionalize(sol, scaling);
        std::vector<double> um;
        um.reserve(profile.x.size());
        for (double x : profile.x)
            um.push_back(model(x, profile.time));
        const Metadata meta = {
            {"command", "fit"},           {"input", a.input},
            {"alpha", format_g17(res.alpha)}, {"D0", format_g17(res.D0)},
            {"m", format_g17(res.m)},     {"time", format_g17(profile.time)},
        };
        auto f = open_out(a.out, "fit_overlay.csv");
        subflow::io::write_csv(f, meta, {"x", "u_data", "u_model"},
                               {profile.x, profile.u, um});
    }
}

// --------------------------------------------------------------- collapse

struct CollapseArgs {
    std::string history;
    double alpha = 0.5, m = 1.0;
    std::string bc = "concentration";
    std::vector<double> times;
    std::string out = ".";
};

void run_collapse(const CollapseArgs& a) {
    std::vector<std::string> header;
    const auto cols = subflow::io::read_csv_columns(a.history, &header);
    if (header.size() != 3 || header[0] != "t" || header[1] != "x" || header[2] != "u")
        throw ValidationError("history file must have columns t,x,u");

    std::map<double, std::vector<std::pair<double, double>>> groups;
    for (std::size_t i = 0; i < cols[0].size(); ++i)
        groups[cols[0][i]].emplace_back(cols[1][i], cols[2][i]);

    std::vector<double> use;
    if (a.times.empty()) {
        for (const auto& [t, rows] : groups)
            use.push_back(t);
    } else {
        for (double t : a.times) {
            bool found = false;
            for (const auto& [key, rows] : groups) {
                if (std::abs(key - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
                    use.push_back(key);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw ValidationError("time " + format_g17(t) + " not present in history");
        }
    }
    if (use.size() < 2)
        throw ValidationError("need at least 2 profiles to measure collapse");
    for (double t : use)
        if (!(t > 0.0))
            throw ValidationError("collapse times must be > 0");

    const auto exps = exps_any_m(a.alpha, a.m, parse_bc(a.bc));
    std::vector<std::vector<double>> eta(use.size()), v(use.size());
    double eta_max = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < use.size(); ++s) {
        auto rows = groups[use[s]];
        std::sort(rows.begin(), rows.end());
        const double tb = std::pow(use[s], -exps.b), ta = std::pow(use[s], -exps.a);
        for (const auto& [x, u] : rows) {
            eta[s].push_back(x * tb);
            v[s].push_back(u * ta);
        }
        if (eta[s].size() < 2)
            throw ValidationError("profile at t=" + format_g17(use[s]) + " has too few rows");
        eta_max = std::min(eta_max, eta[s].back());
    }

    const int grid = 512;
    double worst = 0.0;
    for (std::size_t s1 = 0; s1 < use.size(); ++s1)
        for (std::size_t s2 = s1 + 1; s2 < use.size(); ++s2)
            for (int j = 0; j <= grid; ++j) {
                const double e = eta_max * j / grid;
                worst = std::max(worst, std::abs(interp_xy(eta[s1], v[s1], e) -
                                                 interp_xy(eta[s2], v[s2], e)));
            }

    auto f = open_out(a.out, "collapse.txt");
    f << "# command=collapse\n";
    f << "# history=" << a.history << "\n";
    f << "# alpha=" << format_g17(a.alpha) << "\n";
    f << "# m=" << format_g17(a.m) << "\n";
    f << "# bc=" << a.bc << "\n";
    f << "# a=" << format_g17(exps.a) << "\n";
    f << "# b=" << format_g17(exps.b) << "\n";
    f << "collapse_sup_distance=" << format_g17(worst) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    // The optional JSON config seeds flag defaults; explicit flags override.
    json cfg;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc)
            path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            path = arg.substr(9);
        if (path.empty())
            continue;
        std::ifstream in(path);
        if (!in) {
            std::cerr << "error: cannot open config file " << path << "\n";
            return 2;
        }
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            std::cerr << "error: bad config file: " << e.what() << "\n";
            return 2;
        }
    }
    auto getd = [&](const char* key, double& var) {
        if (cfg.contains(key))
            var = cfg[key].get<double>();
    };
    auto geti = [&](const char* key, int& var) {
        if (cfg.contains(key))
            var = cfg[key].get<int>();
    };
    auto gets = [&](const char* key, std::string& var) {
        if (cfg.contains(key))
            var = cfg[key].get<std::string>();
    };
    auto getvd = [&](const char* key, std::vector<double>& var) {
        if (cfg.contains(key))
            var = cfg[key].get<std::vector<double>>();
    };
    auto getvi = [&](const char* key, std::vector<int>& var) {
        if (cfg.contains(key))
            var = cfg[key].get<std::vector<int>>();
    };

    SelfsimArgs sa;
    FdArgs fa;
    EkArgs ea;
    FitArgs ta;
    CollapseArgs ca;
    try {
        getd("alpha", sa.alpha), getd("m", sa.m), gets("bc", sa.bc);
        geti("n_terms", sa.n_terms), geti("eta_points", sa.eta_points);
        getd("t_min", sa.t_min), getd("t_max", sa.t_max), geti("t_points", sa.t_points);
        gets("out", sa.out);
        getd("alpha", fa.alpha), getd("m", fa.m), gets("bc", fa.bc);
        geti("nx", fa.nx), getd("dx", fa.dx), getd("dt", fa.dt), getd("t_end", fa.t_end);
        getd("theta", fa.theta), getvd("times", fa.times), gets("out", fa.out);
        getd("beta", ea.beta), getd("gamma", ea.gamma), getd("delta", ea.delta);
        gets("profile", ea.profile), getvi("n_list", ea.n_list);
        getd("eta_max", ea.eta_max), geti("points", ea.points), gets("out", ea.out);
        gets("input", ta.input), getd("fix_m", ta.fix_m), geti("n_terms", ta.n_terms);
        gets("out", ta.out);
        gets("history", ca.history), getd("alpha", ca.alpha), getd("m", ca.m);
        gets("bc", ca.bc), getvd("times", ca.times), gets("out", ca.out);
    } catch (const std::exception& e) {
        std::cerr << "error: bad config value: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"approximate self-similar solutions of the time-fractional "
                 "porous medium equation"};
    app.require_subcommand(1);
    std::string config_path_unused;

    auto* cmd_selfsim = app.add_subcommand("selfsim", "truncated-series similarity solution");
    cmd_selfsim->add_option("--config", config_path_unused, "JSON config file");
    cmd_selfsim->add_option("--alpha", sa.alpha, "time-derivative order in (0, 1]");
    cmd_selfsim->add_option("--m", sa.m, "diffusivity exponent");
    cmd_selfsim->add_option("--bc", sa.bc, "boundary kind: concentration or flux");
    cmd_selfsim->add_option("-N,--n-terms", sa.n_terms, "series truncation");
    cmd_selfsim->add_option("--eta-points", sa.eta_points, "profile sample count");
    cmd_selfsim->add_option("--t-min", sa.t_min, "moisture table start time");
    cmd_selfsim->add_option("--t-max", sa.t_max, "moisture table end time");
    cmd_selfsim->add_option("--t-points", sa.t_points, "moisture table size");
    cmd_selfsim->add_option("-o,--out", sa.out, "output directory");

    auto* cmd_fd = app.add_subcommand("fd", "reference finite-difference run");
    cmd_fd->add_option("--config", config_path_unused, "JSON config file");
    cmd_fd->add_option("--alpha", fa.alpha, "time-derivative order in (0, 1]");
    cmd_fd->add_option("--m", fa.m, "diffusivity exponent (0 = linear)");
    cmd_fd->add_option("--bc", fa.bc, "boundary kind: concentration or flux");
    cmd_fd->add_option("--nx", fa.nx, "grid node count");
    cmd_fd->add_option("--dx", fa.dx, "grid spacing");
    cmd_fd->add_option("--dt", fa.dt, "time step");
    cmd_fd->add_option("--t-end", fa.t_end, "final time");
    cmd_fd->add_option("--theta", fa.theta, "implicitness weight in [0, 1]");
    cmd_fd->add_option("--times", fa.times, "snapshot times for history/collapse");
    cmd_fd->add_option("-o,--out", fa.out, "output directory");

    auto* cmd_ek = app.add_subcommand("ek-error", "operator expansion error table");
    cmd_ek->add_option("--config", config_path_unused, "JSON config file");
    cmd_ek->add_option("--beta", ea.beta, "operator parameter beta > -1");
    cmd_ek->add_option("--gamma", ea.gamma, "operator parameter gamma > 0");
    cmd_ek->add_option("--delta", ea.delta, "operator parameter delta != 0");
    cmd_ek->add_option("--profile", ea.profile, "test function: exp-decay or sqrt-support");
    cmd_ek->add_option("--n-list", ea.n_list, "term counts to tabulate");
    cmd_ek->add_option("--eta-max", ea.eta_max, "largest eta in the table");
    cmd_ek->add_option("--points", ea.points, "table size");
    cmd_ek->add_option("-o,--out", ea.out, "output directory");

    auto* cmd_fit = app.add_subcommand("fit", "fit the approximant to a profile");
    cmd_fit->add_option("--config", config_path_unused, "JSON config file");
    cmd_fit->add_option("-i,--input", ta.input, "measured profile CSV");
    auto* fix_m_opt = cmd_fit->add_option("--fix-m", ta.fix_m, "hold m fixed at this value");
    cmd_fit->add_option("-N,--n-terms", ta.n_terms, "series truncation");
    cmd_fit->add_option("-o,--out", ta.out, "output directory");

    auto* cmd_collapse = app.add_subcommand("collapse", "rescaled-profile collapse check");
    cmd_collapse->add_option("--config", config_path_unused, "JSON config file");
    cmd_collapse->add_option("--history", ca.history, "history.csv from an fd run");
    cmd_collapse->add_option("--alpha", ca.alpha, "time-derivative order in (0, 1]");
    cmd_collapse->add_option("--m", ca.m, "diffusivity exponent");
    cmd_collapse->add_option("--bc", ca.bc, "boundary kind: concentration or flux");
    cmd_collapse->add_option("--times", ca.times, "profile times (default: all in file)");
    cmd_collapse->add_option("-o,--out", ca.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_selfsim->parsed())
            run_selfsim(sa);
        else if (cmd_fd->parsed())
            run_fd(fa);
        else if (cmd_ek->parsed())
            run_ek_error(ea);
        else if (cmd_fit->parsed())
            run_fit(ta, fix_m_opt->count() > 0 || cfg.contains("fix_m"));
        else if (cmd_collapse->parsed())
            run_collapse(ca);
        return 0;
    } catch (const subflow::FrontReachedBoundaryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const subflow::SchemeQualityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const subflow::FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
