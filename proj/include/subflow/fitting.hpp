#pragma once

#include "subflow/selfsim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subflow::fitting {

/// One measured profile u(x) at a fixed time.
struct MoistureProfile {
    std::vector<double> x;
    std::vector<double> u;
    double time = 0.0;
    double amplitude = 1.0; ///< boundary concentration or flux
    selfsim::Boundary bc = selfsim::Boundary::concentration;
    std::string x_unit, u_unit;
};

/// CSV loader: `# key=value` metadata lines (time, amplitude, bc, units),
/// then an `x,u` header and data rows. Throws ParseError with the line
/// number on malformed input; rows are sorted by x, duplicates rejected.
MoistureProfile load_profile(const std::string& path);

/// Model parameters being estimated.
struct FitParams {
    double alpha;
    double D0;
    double m;
};

/// Sum of squared residuals between the profile and the similarity model
/// with the given parameters. Parameter sets where the model construction
/// fails score infinity; `error_count` (if given) tallies those.
double objective(const MoistureProfile& profile, const FitParams& params, int n_terms,
                 int* error_count = nullptr);

struct FitOptions {
    std::optional<double> fix_m;      ///< hold m fixed at this value
    std::optional<FitParams> start;   ///< skip the built-in start heuristic
    int n_terms = 3;
    double tol = 1e-9;
    int max_iter = 4000;
};

struct FitResult {
    double alpha, D0, m;
    double sse;
    int iterations;
    bool converged;
    int solver_errors; ///< objective evaluations that threw
};

/// Estimate (alpha, D0[, m]) by simplex descent on the squared misfit,
/// seeded by a coarse alpha sweep. Throws FitError on degenerate input
/// (fewer than 5 samples, or all zeros).
FitResult fit(const MoistureProfile& profile, const FitOptions& options = {});

/**
 * Direct probe of the spreading exponent b: for each profile take the
 * largest x where u still reaches `level` times that profile's maximum,
 * then regress log x against log t. Needs >= 3 profiles at distinct times.
 */
double scaling_exponent_probe(const std::vector<MoistureProfile>& profiles, double level = 0.1);

} // namespace subflow::fitting
