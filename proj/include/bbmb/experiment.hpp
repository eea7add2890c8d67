/// @file experiment.hpp
/// @brief Experiment harness: refinement chains, invariant runs and the
/// stability sweep, with deterministic CSV/report output.
///
/// Independent solver runs execute concurrently; results are merged in chain
/// order before anything is written, so output does not depend on scheduling.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bbmb/analysis.hpp"
#include "bbmb/config.hpp"

namespace bbmb {

enum class Mode { run, convergence, invariants, stability };

std::string to_string(Mode mode);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    Mode mode = Mode::run;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;  ///< informational lines (not checks)
    std::vector<std::string> files;  ///< written files, relative to the output directory

    bool all_passed() const;
};

/// Grid of the finest configured case (last M, last N).
Grid1D finest_grid(const ExperimentConfig& config);

/// Error table over the M chain at N = N.back(). Uses the exact solution when
/// one exists and posterior mode is off, otherwise F-infinity (one extra run
/// at 2 M.back()). `threads` <= 0 means one thread per case.
std::vector<ConvergenceRow> spatial_chain(const ExperimentConfig& config, int threads = 0);

/// Error table over the N chain at M = M.back(); G-infinity when posterior.
std::vector<ConvergenceRow> temporal_chain(const ExperimentConfig& config, int threads = 0);

/// Energy trace for one (mu, nu) pair on the finest grid.
struct InvariantTrace {
    double mu = 0.0;
    double nu = 0.0;
    std::vector<std::pair<double, double>> energy;  ///< (t, E)
    double max_relative_drift = 0.0;
    double max_l2 = 0.0;  ///< max_k ||u^k||
    double bound = 0.0;   ///< boundedness_bound of the initial data
    double max_v_residual = 0.0;
};

/// One trace per mu_nu pair (or the configured mu, nu when none are given).
std::vector<InvariantTrace> invariant_traces(const ExperimentConfig& config, int threads = 0);

/// Max-norm error against the exact solution for every (tau, h) pair of the
/// N x M lists: result[n][m].
std::vector<std::vector<double>> stability_sweep(const ExperimentConfig& config, int threads = 0);

/// True when `errors` (ordered coarse to fine h) never increase by more than
/// `tolerance` relatively and the last two differ by at most `tolerance`.
bool monotone_then_flat(const std::vector<double>& errors, double tolerance);

struct GapResult {
    std::vector<std::pair<double, double>> gap;       ///< (t, |eta|_1) at amplitude eps
    std::vector<std::pair<double, double>> half_gap;  ///< (t, |eta|_1) at eps / 2
    double perturbation_h1 = 0.0;                     ///< |phi0|_1 at eps
    double ratio_to_perturbation = 0.0;               ///< sup gap / |phi0|_1
    double halving_ratio = 0.0;                       ///< sup gap / sup half_gap
};

/// Runs the configured problem unperturbed and with eps sin(2 pi (x - x_left) / L)
/// and eps/2 added to the initial data, on the finest grid.
GapResult perturbation_gap(const ExperimentConfig& config, int threads = 0);

/// Runs `mode`, writes its files and report.txt into `out_dir`.
/// Solver failures (Divergence, SingularSystem) leave a STALE marker and
/// a report saying so, then propagate.
ExperimentReport run_experiment(const ExperimentConfig& config, Mode mode,
                                const std::filesystem::path& out_dir, int threads = 0);

/// 15 significant digits, fixed exponent form.
std::string format_real(double value);

}  // namespace bbmb
