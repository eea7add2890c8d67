/// @file problems.hpp
/// @brief Built-in test problems.
///
///  - manufactured: u_t - u_xxt + u u_x + u_x - u_xx = f on [0, 2), exact u = e^t sin(pi x)
///  - soliton: sech^2 pulse on [-25, 25), no exact solution
///  - double_well: sech^2 pulse on [-50, 50) with reaction F(u) = (1 - u^2)^2 / 4

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bbmb/scheme.hpp"

namespace bbmb {

struct Problem {
    std::string name;
    double x_left = 0.0;
    double x_right = 1.0;
    SchemeParams params;
    std::function<double(double)> initial;
    /// Exact solution u(x, t) and u_xx(x, t), when known.
    std::optional<ExactSolution> exact;
};

/// u = e^t sin(pi x) on [0, 2) with the source that makes it exact for the
/// given coefficients (all 1 by default).
Problem manufactured_problem(double mu = 1.0, double gamma = 1.0, double kappa = 1.0, double nu = 1.0);

/// u(x, 0) = sech^2(x/4)/2 on [-25, 25), gamma = kappa = 1.
Problem soliton_problem(double mu = 1.0, double nu = 1.0);

/// u(x, 0) = (sqrt(6)/3) sech^2(x/3) on [-50, 50), all coefficients 1, F(u) = (1-u^2)^2/4.
Problem double_well_problem();

}  // namespace bbmb
