#pragma once

#include "subflow/selfsim.hpp"

#include <vector>

namespace subflow::fd {

/// Grid, time window and scheme controls for the direct solver.
struct FDConfig {
    int nx;           ///< interior+boundary node count, >= 16
    double dx;        ///< > 0
    double dt;        ///< > 0
    double t_end;     ///< > 0
    double alpha;     ///< in (0, 1]
    double m;         ///< >= 0 (m = 0 is linear diffusion)
    selfsim::Boundary bc = selfsim::Boundary::concentration;
    double theta = 1.0; ///< implicitness of the diffusion term, in [0, 1]
};
void validate(const FDConfig& cfg);

/// Solution history on the uniform grid x_i = i dx, starting from u = 0.
struct FDField {
    std::vector<std::vector<double>> history; ///< history[n][i] = u(x_i, t_n)
    std::vector<double> times;                ///< t_0 = 0, t_n = n dt
    int clamp_count = 0;                      ///< negative values zeroed
    double clamped_mass = 0.0;                ///< total mass removed by clamping
};

/// L1 weights b_j = (j+1)^{1-alpha} - j^{1-alpha}, j = 0..n-1.
std::vector<double> l1_weights(double alpha, int n);

/// One time step: L1 memory sum, frozen face diffusivities, theta-weighted
/// tridiagonal solve, negative clamping.
void advance(const FDConfig& cfg, FDField& field);

/**
 * Run to t_end. Throws FrontReachedBoundaryError if the moisture front
 * reaches the far edge of the grid, SchemeQualityError if clamping removes
 * more than a 1e-6 fraction of the total mass.
 */
FDField run(const FDConfig& cfg);

/// Largest sup distance between any two rescaled snapshots
/// (x -> x t^{-b}, u -> u t^{-a}) interpolated to a common eta grid.
double collapse_diagnostic(const FDField& field, const FDConfig& cfg,
                           const selfsim::SimilarityExponents& exps,
                           const std::vector<double>& times);

/// Front path: (t, x_front) with x_front the first crossing of `threshold`
/// (defaulting to 1e-3 of the row maximum) by linear interpolation.
std::vector<std::pair<double, double>> wetting_front_numeric(const FDField& field,
                                                             const FDConfig& cfg,
                                                             double threshold = -1.0);

/// Trapezoid-rule mass int u dx per stored time.
std::vector<double> cumulative_moisture_numeric(const FDField& field, const FDConfig& cfg);

} // namespace subflow::fd
