/// @file analysis.hpp
/// @brief Error norms, grid-halving error estimators, convergence tables and
/// the perturbation-gap stability measure.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bbmb/grid.hpp"

namespace bbmb {

/// Upper bound on ||u^k|| implied by the energy identity for conservative runs:
/// 2 (||u0|| + mu |u0|_1^2 + (mu h^2/12)||v0||^2 - (mu h^4/144)|v0|_1^2).
double boundedness_bound(const PeriodicField& u0, const PeriodicField& v0, double h, double mu);

/// max_{i,k} |exact(x_i, t_k) - u_i^k| over levels u^0..u^N.
double max_norm_error(std::span<const PeriodicField> levels, const Grid1D& grid,
                      const std::function<double(double, double)>& exact);

/// max_{i,k} |u_i^k(h) - u_{2i}^k(h/2)|; both runs share the step count.
double posterior_spatial_error(std::span<const PeriodicField> coarse,
                               std::span<const PeriodicField> fine);

/// max_{i,k} |u_i^k(tau) - u_i^{2k}(tau/2)|; both runs share the node count.
double posterior_temporal_error(std::span<const PeriodicField> coarse,
                                std::span<const PeriodicField> fine);

struct ConvergenceRow {
    double step = 0.0;
    double error = 0.0;
    std::optional<double> order;  ///< log2(previous error / this error); absent on the first row
};

/// Rows in input order; steps must halve from one entry to the next.
std::vector<ConvergenceRow> convergence_table(std::span<const std::pair<double, double>> errors);

/// Least-squares slope of log(error) against log(step).
double fitted_order(std::span<const ConvergenceRow> rows);

/// (t_k, |uhat^k - u^k|_1) for two runs on the same grid.
std::vector<std::pair<double, double>> stability_gap(std::span<const PeriodicField> base,
                                                     std::span<const PeriodicField> perturbed,
                                                     const Grid1D& grid);

}  // namespace bbmb
