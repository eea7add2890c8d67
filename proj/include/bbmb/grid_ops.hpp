/// @file grid_ops.hpp
/// @brief Checked periodic difference operators, inner products and norms.
///
/// Every function is pure. Inputs shorter than kMinNodes, length mismatches
/// and non-positive h raise InvalidInput.

#pragma once

#include "bbmb/grid.hpp"

namespace bbmb {

/// Second difference (u_{i+1} - 2u_i + u_{i-1}) / h^2.
PeriodicField delta2x(const PeriodicField& u, double h);

/// Central difference (u_{i+1} - u_{i-1}) / (2h).
PeriodicField central_dx(const PeriodicField& u, double h);

/// Half-node differences; entry i holds (u_i - u_{i-1}) / h.
PeriodicField delta_x_half(const PeriodicField& u, double h);

/// Skew-symmetric compact form of u u_x:
/// psi(a,b)_i = (1/3)[a_i Dx b_i + Dx(ab)_i], evaluated in expanded single-pass form.
PeriodicField psi(const PeriodicField& a, const PeriodicField& b, double h);

/// (u, w) = h * sum u_i w_i
double inner_product(const PeriodicField& u, const PeriodicField& w, double h);

/// <dx u, dx w> = h * sum (dx u_{i-1/2})(dx w_{i-1/2})
double h1_inner_product(const PeriodicField& u, const PeriodicField& w, double h);

struct DiscreteNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double max = 0.0;
};

DiscreteNorms discrete_norms(const PeriodicField& u, double h);

double l2_norm_squared(const PeriodicField& u, double h);
double h1_semi_squared(const PeriodicField& u, double h);
double max_norm(const PeriodicField& u);

}  // namespace bbmb
