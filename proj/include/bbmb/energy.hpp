/// @file energy.hpp
/// @brief Discrete energy functional of the compact scheme and its dissipation ledger.
///
/// For the conservative scheme (no source, no reaction) the quantity
///
///   E_k = 1/2 (||u^{k+1}||^2 + ||u^k||^2)
///       + mu/2 (B(u^{k+1}, v^{k+1}) + B(u^k, v^k))
///       + nu*tau*B(u^{1/2}, v^{1/2}) + 2 nu tau sum_{l=1..k} B(u^{l-bar}, v^{l-bar})
///
/// stays equal to its initial value, where
/// B(u, v) = |u|_1^2 + (h^2/12)||v||^2 - (h^4/144)|v|_1^2.

#pragma once

#include "bbmb/grid.hpp"

namespace bbmb {

struct EnergyLedger {
    /// nu*tau*B(u^{1/2}, v^{1/2}) from the first step.
    double nu_tau_first = 0.0;
    /// Running 2*nu*tau*sum of B over the averaged interior levels.
    double nu_tau_sum = 0.0;
    /// Right side of the energy identity, fixed at initialization.
    double rhs0 = 0.0;
};

/// |u|_1^2 + (h^2/12)||v||^2 - (h^4/144)|v|_1^2
double dissipation_bracket(const PeriodicField& u, const PeriodicField& v, double h);

/// ||u0||^2 + mu |u0|_1^2 + (mu h^2/12)||v0||^2 - (mu h^4/144)|v0|_1^2
double initial_energy(const PeriodicField& u0, const PeriodicField& v0, double h, double mu);

/// Full left side of the energy identity at levels (k+1, k).
double energy_pair(const PeriodicField& u_next, const PeriodicField& u_curr,
                   const PeriodicField& v_next, const PeriodicField& v_curr,
                   const EnergyLedger& ledger, double h, double mu);

void record_first_step(EnergyLedger& ledger, const PeriodicField& u0, const PeriodicField& u1,
                       const PeriodicField& v0, const PeriodicField& v1, double h, double nu,
                       double tau);

void record_interior_step(EnergyLedger& ledger, const PeriodicField& u_prev,
                          const PeriodicField& u_next, const PeriodicField& v_prev,
                          const PeriodicField& v_next, double h, double nu, double tau);

}  // namespace bbmb
