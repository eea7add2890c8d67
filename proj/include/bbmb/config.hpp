/// @file config.hpp
/// @brief Experiment configuration: a line-oriented `key = value` text format.
///
/// Blank lines and text after `#` are ignored. List values are separated by
/// whitespace or commas; rationals such as `1/5000` are accepted wherever a
/// real is expected. Recognised keys:
///
///   experiment            example1 | example2 | example3 | custom   (required)
///   x_left, x_right       domain (presets fill these in)
///   mu, gamma, kappa, nu  coefficients (presets fill these in)
///   T                     final time
///   M                     node counts, ascending, each twice the previous
///   N                     step counts, ascending, each twice the previous
///   snapshots             output times in [0, T]
///   energy                on | off
///   posterior             on | off (use grid-halving estimators even if an exact solution exists)
///   output                output directory (the --out flag overrides it)
///   initial               custom only: `sech2 <amplitude> <width>` or `sine <amplitude> <wavenumber>`
///   mu_nu                 coefficient pairs for `invariants`, e.g. `100:1 1:1`
///   perturbation          amplitude of the sin(2 pi x / L) perturbation for `stability`
///   reference_spatial_errors, reference_temporal_errors
///   reference_spatial_orders, reference_temporal_orders
///   expected_spatial_order, expected_temporal_order
///   reference_energy      one value per mu_nu pair (energy at t = 0)
///   error_tolerance       relative, default 0.2
///   order_tolerance       absolute, default 0.25
///   spatial_order_tolerance, temporal_order_tolerance   override order_tolerance per chain
///   magnitude_only        on | off: compare errors to within a factor of 10 instead
///   energy_drift_tolerance   relative, default 1e-9
///   plateau_tolerance     relative flatness of the finest two stability points, default 0.05
///   gap_bound             bound on sup|eta|_1 / |phi0|_1, default 10
///   gap_linearity_tolerance   default 0.05

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bbmb/grid.hpp"
#include "bbmb/problems.hpp"

namespace bbmb {

/// Invalid configuration. what() joins every violation found, one per line.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

enum class ExperimentKind { example1, example2, example3, custom };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::custom;
    double x_left = 0.0;
    double x_right = 0.0;
    double mu = 1.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double nu = 1.0;
    double T = 1.0;
    std::vector<std::size_t> M;
    std::vector<std::size_t> N;
    std::vector<double> snapshots;
    bool energy = true;
    bool posterior = false;
    std::string output_dir = "out";
    std::string initial;
    std::vector<std::pair<double, double>> mu_nu;
    double perturbation = 0.0;

    std::vector<double> reference_spatial_errors;
    std::vector<double> reference_temporal_errors;
    std::vector<double> reference_spatial_orders;
    std::vector<double> reference_temporal_orders;
    std::optional<double> expected_spatial_order;
    std::optional<double> expected_temporal_order;
    std::vector<double> reference_energy;
    double error_tolerance = 0.2;
    double spatial_order_tolerance = 0.25;
    double temporal_order_tolerance = 0.25;
    bool magnitude_only = false;
    double energy_drift_tolerance = 1e-9;
    double plateau_tolerance = 0.05;
    double gap_bound = 10.0;
    double gap_linearity_tolerance = 0.05;

    /// Problem definition with these coefficients applied.
    Problem problem() const;
    Problem problem(double mu_override, double nu_override) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

std::string to_string(ExperimentKind kind);

}  // namespace bbmb
