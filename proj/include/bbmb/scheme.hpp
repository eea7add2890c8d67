/// @file scheme.hpp
/// @brief Three-level linearized compact scheme for the periodic BBMB equation
///
///     u_t - mu u_xxt + gamma u u_x + kappa u_x - nu u_xx (+ F'(u)) = f(x, t).
///
/// The solver carries u together with v ~ u_xx, tied by the fourth-order
/// compact relation v = d2x u - (h^2/12) d2x v. The first step is two-level
/// (Crank-Nicolson about t_{1/2}); later steps average the unknown over levels
/// k-1 and k+1 while freezing the nonlinear coefficient at level k, so every
/// step is a single linear cyclic block-tridiagonal solve in (u_i, v_i) pairs.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bbmb/energy.hpp"
#include "bbmb/grid.hpp"
#include "bbmb/linalg.hpp"

namespace bbmb {

using SourceFn = std::function<double(double x, double t)>;
using ScalarFn = std::function<double(double)>;

/// Reaction term F'(u) given by its first and second derivatives of F.
struct Reaction {
    ScalarFn first;   ///< F'(u)
    ScalarFn second;  ///< F''(u)
};

struct SchemeParams {
    double mu = 1.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double nu = 1.0;
    SourceFn source;                  ///< right-hand side f(x, t); empty means zero
    std::optional<Reaction> reaction;  ///< F'(u) term, linearized about level k

    /// Throws InvalidInput unless mu > 0, gamma >= 0, coefficients finite and
    /// both reaction callbacks present when a reaction is configured.
    void validate() const;
    bool conservative() const { return !source && !reaction; }
};

struct StepperState {
    std::size_t k = 0;
    PeriodicField u_prev, u_curr;  ///< u^{k-1}, u^k (u_prev == u_curr at k = 0)
    PeriodicField v_prev, v_curr;
    EnergyLedger ledger;
    /// Compact-relation residual of (u_curr, v_curr), relative to 4|u|/h^2 + 2|v|.
    double v_residual = 0.0;
    SolveInfo last_solve;
};

/// Per-row stencil of b -> psi(a, b): psi(a,b)_i = sub_i b_{i-1} + super_i b_{i+1}.
struct PsiRow {
    double sub = 0.0;
    double diag = 0.0;
    double super = 0.0;
};

std::vector<PsiRow> psi_row_coefficients(const PeriodicField& a, double h);

/// Linearization of F'(u-bar) about level k:
///   F'(u^k) + F''(u^k)(u-bar - u^k) = base + 2 * diag * u-bar,
/// with diag_i = F''(u^k_i)/2 (the weight on the new level inside u-bar)
/// and base_i = F'(u^k_i) - F''(u^k_i) u^k_i.
struct ReactionTerms {
    std::vector<double> diag;
    std::vector<double> base;
};

ReactionTerms newton_reaction_terms(const PeriodicField& u_k, const SchemeParams& params);

/// Solves the constant-coefficient compact relation (I + (h^2/12) d2x) v = d2x u.
PeriodicField compact_second_derivative(const PeriodicField& u, double h);

/// max |v - d2x u + (h^2/12) d2x v| / (4 max|u| / h^2 + 2 max|v|)
double compact_relation_residual(const PeriodicField& u, const PeriodicField& v, double h);

StepperState init_state(const PeriodicField& u0, const Grid1D& grid, const SchemeParams& params);
StepperState init_state(const std::function<double(double)>& phi, const Grid1D& grid,
                        const SchemeParams& params);

CyclicBlockTriSystem assemble_first_step(const StepperState& state, const Grid1D& grid,
                                         const SchemeParams& params);
CyclicBlockTriSystem assemble_interior_step(const StepperState& state, const Grid1D& grid,
                                            const SchemeParams& params);

enum class ReactionEval { linearized, exact };

/// Step equations evaluated directly with the grid operators, for a candidate
/// next level (u_next, v_next). `row_a` is the momentum equation, `row_b` the
/// compact relation. With ReactionEval::linearized this is exactly A x - b of
/// the assembled system; ReactionEval::exact uses F'(u-bar) instead.
struct StepResidual {
    PeriodicField row_a;
    PeriodicField row_b;
};

StepResidual step_residual(const StepperState& state, const PeriodicField& u_next,
                           const PeriodicField& v_next, const Grid1D& grid,
                           const SchemeParams& params,
                           ReactionEval reaction_eval = ReactionEval::linearized);

/// Takes one step from level k to k+1 and updates the energy ledger.
/// Throws Divergence on non-finite output, SingularSystem if the solve fails.
StepperState advance(StepperState state, const Grid1D& grid, const SchemeParams& params,
                     const SolveOptions& solve_options = {});

struct Snapshot {
    double t = 0.0;
    PeriodicField u;
};

struct RunOptions {
    std::vector<double> snapshot_times;
    bool track_energy = true;
    /// Keep every level u^0..u^N (needed by the error estimators).
    bool record_trajectory = false;
    /// Called after initialization and after every step.
    std::function<void(const StepperState&)> observer;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::vector<std::pair<double, double>> energy_series;
    std::vector<PeriodicField> trajectory;
    /// Largest compact-relation residual over all levels.
    double max_v_residual = 0.0;
    /// Final state, for continuation or inspection.
    StepperState final_state;
};

RunResult run(const PeriodicField& u0, const Grid1D& grid, const SchemeParams& params,
              const RunOptions& options = {});
RunResult run(const std::function<double(double)>& phi, const Grid1D& grid,
              const SchemeParams& params, const RunOptions& options = {});

/// Exact solution callbacks used to measure the truncation residuals.
struct ExactSolution {
    std::function<double(double, double)> u;
    std::function<double(double, double)> u_xx;
};

struct TruncationResidual {
    double max_q0 = 0.0;  ///< first-step equation defect
    double max_qk = 0.0;  ///< interior equation defect, max over k = 1..N-1
    double max_rk = 0.0;  ///< compact relation defect, max over k = 0..N
};

/// Inserts exact samples U = u(x_i, t_k), V = u_xx(x_i, t_k) into the scheme
/// (with params.source on the right) and reports the largest defects.
TruncationResidual truncation_residual(const ExactSolution& exact, const Grid1D& grid,
                                       const SchemeParams& params);

}  // namespace bbmb
