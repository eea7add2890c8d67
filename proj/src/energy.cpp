#include "bbmb/energy.hpp"

#include "bbmb/grid_ops.hpp"

namespace bbmb {

double dissipation_bracket(const PeriodicField& u, const PeriodicField& v, double h) {
    const double h2 = h * h;
    return h1_semi_squared(u, h) + (h2 / 12.0) * l2_norm_squared(v, h) -
           (h2 * h2 / 144.0) * h1_semi_squared(v, h);
}

double initial_energy(const PeriodicField& u0, const PeriodicField& v0, double h, double mu) {
    return l2_norm_squared(u0, h) + mu * dissipation_bracket(u0, v0, h);
}

double energy_pair(const PeriodicField& u_next, const PeriodicField& u_curr,
                   const PeriodicField& v_next, const PeriodicField& v_curr,
                   const EnergyLedger& ledger, double h, double mu) {
    const double mass = 0.5 * (l2_norm_squared(u_next, h) + l2_norm_squared(u_curr, h));
    const double disp = 0.5 * mu * (dissipation_bracket(u_next, v_next, h) +
                                    dissipation_bracket(u_curr, v_curr, h));
    return mass + disp + ledger.nu_tau_first + ledger.nu_tau_sum;
}

void record_first_step(EnergyLedger& ledger, const PeriodicField& u0, const PeriodicField& u1,
                       const PeriodicField& v0, const PeriodicField& v1, double h, double nu,
                       double tau) {
    ledger.nu_tau_first = nu * tau * dissipation_bracket(average(u0, u1), average(v0, v1), h);
}

void record_interior_step(EnergyLedger& ledger, const PeriodicField& u_prev,
                          const PeriodicField& u_next, const PeriodicField& v_prev,
                          const PeriodicField& v_next, double h, double nu, double tau) {
    ledger.nu_tau_sum +=
        2.0 * nu * tau * dissipation_bracket(average(u_prev, u_next), average(v_prev, v_next), h);
}

}  // namespace bbmb
