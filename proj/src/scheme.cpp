#include "bbmb/scheme.hpp"

#include <cmath>
#include <string>

#include "bbmb/grid_ops.hpp"
#include "bbmb/kernels.hpp"

namespace bbmb {
namespace {

// Which levels play which role in the step being taken.
struct StepLevels {
    const PeriodicField& coeff_u;  // nonlinear coefficient level (u^0 or u^k)
    const PeriodicField& coeff_v;
    const PeriodicField& known_u;  // level averaged with the unknown (u^0 or u^{k-1})
    const PeriodicField& known_v;
    double time_coeff;             // 1/tau (first step) or 1/(2 tau)
    double source_time;            // t_{1/2} or t_k
};

StepLevels levels_for(const StepperState& s, const Grid1D& grid) {
    if (s.k == 0) return {s.u_curr, s.v_curr, s.u_curr, s.v_curr, 1.0 / grid.tau(), 0.5 * grid.tau()};
    return {s.u_curr, s.v_curr, s.u_prev, s.v_prev, 0.5 / grid.tau(), grid.t(s.k)};
}

void check_state(const StepperState& s, const Grid1D& grid) {
    const std::size_t M = grid.nodes();
    if (s.u_curr.size() != M || s.v_curr.size() != M || s.u_prev.size() != M ||
        s.v_prev.size() != M)
        throw InvalidInput("stepper state does not match the grid's node count");
}

// gamma psi(cu, w) - (gamma h^2/2) psi(cv, w) + kappa Dx w - (kappa h^2/6) Dx z - nu z
PeriodicField spatial_operator(const PeriodicField& cu, const PeriodicField& cv,
                               const PeriodicField& w, const PeriodicField& z, double h,
                               const SchemeParams& p) {
    const double h2 = h * h;
    const PeriodicField a = psi(cu, w, h);
    const PeriodicField b = psi(cv, w, h);
    const PeriodicField dw = central_dx(w, h);
    const PeriodicField dz = central_dx(z, h);
    PeriodicField out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        out[i] = p.gamma * a[i] - 0.5 * p.gamma * h2 * b[i] + p.kappa * dw[i] -
                 p.kappa * h2 / 6.0 * dz[i] - p.nu * z[i];
    return out;
}

CyclicBlockTriSystem assemble(const StepperState& s, const Grid1D& grid, const SchemeParams& p) {
    check_state(s, grid);
    const StepLevels lv = levels_for(s, grid);
    const std::size_t M = grid.nodes();
    const double h = grid.h();
    const double h2 = h * h;
    const double ct = lv.time_coeff;

    const auto rows_u = psi_row_coefficients(lv.coeff_u, h);
    const auto rows_v = psi_row_coefficients(lv.coeff_v, h);
    ReactionTerms reaction;
    if (p.reaction) reaction = newton_reaction_terms(lv.coeff_u, p);

    const PeriodicField known_op = spatial_operator(lv.coeff_u, lv.coeff_v, lv.known_u, lv.known_v, h, p);

    CyclicBlockTriSystem sys(M);
    const double adv = p.kappa / (4.0 * h);
    const double adv_v = p.kappa * h / 24.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double w_sub = 0.5 * p.gamma * rows_u[i].sub - 0.25 * p.gamma * h2 * rows_v[i].sub;
        const double w_sup = 0.5 * p.gamma * rows_u[i].super - 0.25 * p.gamma * h2 * rows_v[i].super;
        const double r_diag = p.reaction ? reaction.diag[i] : 0.0;

        sys.sub[i] = {w_sub - adv, adv_v, -1.0 / h2, 1.0 / 12.0};
        sys.diag[i] = {ct + r_diag, -p.mu * ct - 0.5 * p.nu, 2.0 / h2, 5.0 / 6.0};
        sys.super[i] = {w_sup + adv, -adv_v, -1.0 / h2, 1.0 / 12.0};

        double rhs = ct * lv.known_u[i] - p.mu * ct * lv.known_v[i] - 0.5 * known_op[i];
        if (p.source) rhs += p.source(grid.x(i), lv.source_time);
        if (p.reaction) rhs -= reaction.base[i] + reaction.diag[i] * lv.known_u[i];
        sys.rhs[i] = {rhs, 0.0};
    }
    return sys;
}

}  // namespace

void SchemeParams::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(gamma) || !std::isfinite(kappa) || !std::isfinite(nu))
        throw InvalidInput("scheme: coefficients must be finite");
    if (!(mu > 0.0)) throw InvalidInput("scheme: mu must be positive");
    if (gamma < 0.0) throw InvalidInput("scheme: gamma must be non-negative");
    if (reaction && (!reaction->first || !reaction->second))
        throw InvalidInput("scheme: reaction needs both F' and F'' callbacks");
}

std::vector<PsiRow> psi_row_coefficients(const PeriodicField& a, double h) {
    const std::size_t M = a.size();
    if (M < kMinNodes) throw InvalidInput("psi_row_coefficients: field needs at least 4 nodes");
    std::vector<PsiRow> rows(M);
    const double s = 1.0 / (6.0 * h);
    for (std::size_t i = 0; i < M; ++i) {
        const double am = a[(i + M - 1) % M];
        const double ap = a[(i + 1) % M];
        rows[i] = {-(a[i] + am) * s, 0.0, (a[i] + ap) * s};
    }
    return rows;
}

ReactionTerms newton_reaction_terms(const PeriodicField& u_k, const SchemeParams& params) {
    if (!params.reaction || !params.reaction->first || !params.reaction->second)
        throw InvalidInput("newton_reaction_terms: reaction callbacks are not configured");
    ReactionTerms t;
    t.diag.resize(u_k.size());
    t.base.resize(u_k.size());
    for (std::size_t i = 0; i < u_k.size(); ++i) {
        const double f1 = params.reaction->first(u_k[i]);
        const double f2 = params.reaction->second(u_k[i]);
        t.diag[i] = 0.5 * f2;
        t.base[i] = f1 - f2 * u_k[i];
    }
    return t;
}

PeriodicField compact_second_derivative(const PeriodicField& u, double h) {
    const std::size_t M = u.size();
    ScalarCyclicTriSystem sys{std::vector<double>(M, 1.0 / 12.0), std::vector<double>(M, 5.0 / 6.0),
                              std::vector<double>(M, 1.0 / 12.0), delta2x(u, h).values()};
    return PeriodicField(solve_scalar_cyclic(sys));
}

double compact_relation_residual(const PeriodicField& u, const PeriodicField& v, double h) {
    const PeriodicField du = delta2x(u, h);
    const PeriodicField dv = delta2x(v, h);
    double res = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        res = std::max(res, std::abs(v[i] - du[i] + h * h / 12.0 * dv[i]));
    const double scale = 4.0 * max_norm(u) / (h * h) + 2.0 * max_norm(v);
    return scale > 0.0 ? res / scale : res;
}

StepperState init_state(const PeriodicField& u0, const Grid1D& grid, const SchemeParams& params) {
    params.validate();
    if (u0.size() != grid.nodes()) throw InvalidInput("init_state: u0 does not match the grid");
    if (!u0.all_finite()) throw InvalidInput("init_state: initial data is not finite");
    StepperState s;
    s.u_curr = u0;
    s.v_curr = compact_second_derivative(u0, grid.h());
    s.u_prev = s.u_curr;
    s.v_prev = s.v_curr;
    s.ledger.rhs0 = initial_energy(s.u_curr, s.v_curr, grid.h(), params.mu);
    s.v_residual = compact_relation_residual(s.u_curr, s.v_curr, grid.h());
    return s;
}

StepperState init_state(const std::function<double(double)>& phi, const Grid1D& grid,
                        const SchemeParams& params) {
    return init_state(sample(grid, phi), grid, params);
}

CyclicBlockTriSystem assemble_first_step(const StepperState& state, const Grid1D& grid,
                                         const SchemeParams& params) {
    if (state.k != 0) throw InvalidInput("assemble_first_step: state is past level 0");
    return assemble(state, grid, params);
}

CyclicBlockTriSystem assemble_interior_step(const StepperState& state, const Grid1D& grid,
                                            const SchemeParams& params) {
    if (state.k == 0) throw InvalidInput("assemble_interior_step: first step not taken yet");
    return assemble(state, grid, params);
}

StepResidual step_residual(const StepperState& state, const PeriodicField& u_next,
                           const PeriodicField& v_next, const Grid1D& grid,
                           const SchemeParams& params, ReactionEval reaction_eval) {
    check_state(state, grid);
    const StepLevels lv = levels_for(state, grid);
    const double h = grid.h();
    const double ct = lv.time_coeff;
    const PeriodicField ubar = average(lv.known_u, u_next);
    const PeriodicField vbar = average(lv.known_v, v_next);
    const PeriodicField op = spatial_operator(lv.coeff_u, lv.coeff_v, ubar, vbar, h, params);

    ReactionTerms reaction;
    if (params.reaction) reaction = newton_reaction_terms(lv.coeff_u, params);

    StepResidual r{PeriodicField(u_next.size()), PeriodicField(u_next.size())};
    for (std::size_t i = 0; i < u_next.size(); ++i) {
        double a = ct * (u_next[i] - lv.known_u[i]) - params.mu * ct * (v_next[i] - lv.known_v[i]) + op[i];
        if (params.reaction) {
            a += reaction_eval == ReactionEval::exact
                     ? params.reaction->first(ubar[i])
                     : reaction.base[i] + 2.0 * reaction.diag[i] * ubar[i];
        }
        if (params.source) a -= params.source(grid.x(i), lv.source_time);
        r.row_a[i] = a;
    }
    const PeriodicField du = delta2x(u_next, h);
    const PeriodicField dv = delta2x(v_next, h);
    for (std::size_t i = 0; i < u_next.size(); ++i)
        r.row_b[i] = v_next[i] - du[i] + h * h / 12.0 * dv[i];
    return r;
}

StepperState advance(StepperState state, const Grid1D& grid, const SchemeParams& params,
                     const SolveOptions& solve_options) {
    const CyclicBlockTriSystem sys = state.k == 0 ? assemble_first_step(state, grid, params)
                                                  : assemble_interior_step(state, grid, params);
    SolveInfo info;
    const std::vector<Vec2> x = solve_cyclic_block_tridiagonal(sys, solve_options, &info);

    const std::size_t M = grid.nodes();
    PeriodicField u_next(M), v_next(M);
    for (std::size_t i = 0; i < M; ++i) {
        u_next[i] = x[i][0];
        v_next[i] = x[i][1];
    }
    const auto next_k = static_cast<long>(state.k + 1);
    if (!u_next.all_finite() || !v_next.all_finite())
        throw Divergence("non-finite solution at step " + std::to_string(next_k), next_k);

    const double h = grid.h();
    if (state.k == 0)
        record_first_step(state.ledger, state.u_curr, u_next, state.v_curr, v_next, h, params.nu, grid.tau());
    else
        record_interior_step(state.ledger, state.u_prev, u_next, state.v_prev, v_next, h, params.nu,
                             grid.tau());

    state.u_prev = std::move(state.u_curr);
    state.v_prev = std::move(state.v_curr);
    state.u_curr = std::move(u_next);
    state.v_curr = std::move(v_next);
    state.k += 1;
    state.v_residual = compact_relation_residual(state.u_curr, state.v_curr, h);
    state.last_solve = info;
    return state;
}

RunResult run(const PeriodicField& u0, const Grid1D& grid, const SchemeParams& params,
              const RunOptions& options) {
    const double tau = grid.tau();
    std::vector<std::size_t> snap_steps;
    for (double t : options.snapshot_times) {
        if (!(t >= -0.5 * tau) || !(t <= grid.final_time() + 0.5 * tau))
            throw InvalidInput("run: snapshot time " + std::to_string(t) + " outside [0, T]");
        snap_steps.push_back(static_cast<std::size_t>(std::llround(std::max(0.0, t) / tau)));
    }

    RunResult out;
    out.snapshots.resize(snap_steps.size());
    auto record = [&](const StepperState& s) {
        for (std::size_t j = 0; j < snap_steps.size(); ++j)
            if (snap_steps[j] == s.k) out.snapshots[j] = {options.snapshot_times[j], s.u_curr};
        if (options.record_trajectory) out.trajectory.push_back(s.u_curr);
        out.max_v_residual = std::max(out.max_v_residual, s.v_residual);
        if (options.track_energy) {
            const double e = s.k == 0 ? s.ledger.rhs0
                                      : energy_pair(s.u_curr, s.u_prev, s.v_curr, s.v_prev, s.ledger,
                                                    grid.h(), params.mu);
            out.energy_series.emplace_back(grid.t(s.k), e);
        }
        if (options.observer) options.observer(s);
    };

    if (options.record_trajectory) out.trajectory.reserve(grid.steps() + 1);
    StepperState state = init_state(u0, grid, params);
    record(state);
    for (std::size_t k = 0; k < grid.steps(); ++k) {
        state = advance(std::move(state), grid, params);
        record(state);
    }
    out.final_state = std::move(state);
    return out;
}

RunResult run(const std::function<double(double)>& phi, const Grid1D& grid,
              const SchemeParams& params, const RunOptions& options) {
    return run(sample(grid, phi), grid, params, options);
}

TruncationResidual truncation_residual(const ExactSolution& exact, const Grid1D& grid,
                                       const SchemeParams& params) {
    params.validate();
    auto level = [&](const std::function<double(double, double)>& f, std::size_t k) {
        const double t = grid.t(k);
        return sample(grid, [&](double x) { return f(x, t); });
    };
    TruncationResidual out;
    const double h = grid.h();

    StepperState s;
    s.u_curr = level(exact.u, 0);
    s.v_curr = level(exact.u_xx, 0);
    s.u_prev = s.u_curr;
    s.v_prev = s.v_curr;
    {
        const PeriodicField du = delta2x(s.u_curr, h);
        const PeriodicField dv = delta2x(s.v_curr, h);
        for (std::size_t i = 0; i < du.size(); ++i)
            out.max_rk = std::max(out.max_rk, std::abs(s.v_curr[i] - du[i] + h * h / 12.0 * dv[i]));
    }
    for (std::size_t k = 0; k < grid.steps(); ++k) {
        PeriodicField u_next = level(exact.u, k + 1);
        PeriodicField v_next = level(exact.u_xx, k + 1);
        const StepResidual r = step_residual(s, u_next, v_next, grid, params);
        const double qa = kernels::serial::max_abs(r.row_a.span());
        (k == 0 ? out.max_q0 : out.max_qk) = std::max(k == 0 ? out.max_q0 : out.max_qk, qa);
        out.max_rk = std::max(out.max_rk, kernels::serial::max_abs(r.row_b.span()));
        s.u_prev = std::move(s.u_curr);
        s.v_prev = std::move(s.v_curr);
        s.u_curr = std::move(u_next);
        s.v_curr = std::move(v_next);
        s.k = k + 1;
    }
    return out;
}

}  // namespace bbmb
