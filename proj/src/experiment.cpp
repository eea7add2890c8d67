#include "bbmb/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bbmb/grid_ops.hpp"
#include "bbmb/scheme.hpp"

namespace bbmb {
namespace {

// Runs f(0..n-1) on up to `threads` threads; the first failure in index order is rethrown.
template <typename F>
void for_each_case(std::size_t n, int threads, F&& f) {
    std::vector<std::exception_ptr> failures(n);
    const int team = threads > 0 ? threads : static_cast<int>(std::max<std::size_t>(n, 1));
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (auto& e : failures)
        if (e) std::rethrow_exception(e);
}

Grid1D make_grid(const ExperimentConfig& c, std::size_t M, std::size_t N) {
    return Grid1D(c.x_left, c.x_right, M, c.T, N);
}

std::vector<PeriodicField> trajectory(const Problem& p, const Grid1D& grid) {
    RunOptions o;
    o.track_energy = false;
    o.record_trajectory = true;
    return run(p.initial, grid, p.params, o).trajectory;
}

// max_{i,k} |exact - u| accumulated on the fly, without storing the trajectory.
double exact_error(const Problem& p, const Grid1D& grid) {
    double err = 0.0;
    RunOptions o;
    o.track_energy = false;
    o.observer = [&](const StepperState& s) {
        const double t = grid.t(s.k);
        for (std::size_t i = 0; i < grid.nodes(); ++i)
            err = std::max(err, std::abs(p.exact->u(grid.x(i), t) - s.u_curr[i]));
    };
    run(p.initial, grid, p.params, o);
    return err;
}

bool use_exact(const ExperimentConfig& c, const Problem& p) { return p.exact && !c.posterior; }

std::string percent(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
    return buf;
}

std::string short_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", x);
    return buf;
}

void write_table(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
    std::ofstream out(path);
    out << "step,error,order\n";
    for (const auto& r : rows)
        out << format_real(r.step) << ',' << format_real(r.error) << ','
            << (r.order ? format_real(*r.order) : "") << '\n';
}

void check_chain(ExperimentReport& report, const char* label, const std::vector<ConvergenceRow>& rows,
                 const std::vector<double>& ref_errors, const std::vector<double>& ref_orders,
                 const std::optional<double>& expected_order, double order_tol,
                 const ExperimentConfig& c) {
    if (!rows.empty())
        report.notes.push_back(std::string(label) + " fitted order " + short_real(fitted_order(rows)));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& r = rows[j];
        const std::string where = std::string(label) + " step " + short_real(r.step);
        if (j < ref_errors.size()) {
            const double ref = ref_errors[j];
            const double ratio = r.error / ref;
            const bool ok = c.magnitude_only ? (ratio >= 0.1 && ratio <= 10.0)
                                             : std::abs(ratio - 1.0) <= c.error_tolerance;
            report.checks.push_back(
                {where + " error", ok,
                 short_real(r.error) + " vs " + short_real(ref) +
                     (c.magnitude_only ? " (ratio " + short_real(ratio) + ", want within 10x)"
                                       : " (deviation " + percent(std::abs(ratio - 1.0)) + ", allowed " +
                                             percent(c.error_tolerance) + ")")});
        }
        if (!r.order) continue;
        std::optional<double> want;
        if (j - 1 < ref_orders.size()) want = ref_orders[j - 1];
        else if (expected_order) want = expected_order;
        if (!want) continue;
        report.checks.push_back({where + " order", std::abs(*r.order - *want) <= order_tol,
                                 short_real(*r.order) + " vs " + short_real(*want) + " +- " +
                                     short_real(order_tol)});
    }
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    for (const auto& l : lines) out << l << '\n';
}

void write_report(const std::filesystem::path& dir, const ExperimentConfig& c, const ExperimentReport& r) {
    std::vector<std::string> lines;
    lines.push_back("mode: " + to_string(r.mode));
    lines.push_back("experiment: " + to_string(c.experiment));
    for (const auto& n : r.notes) lines.push_back("note: " + n);
    for (const auto& ck : r.checks)
        lines.push_back(std::string(ck.passed ? "PASS " : "FAIL ") + ck.name + ": " + ck.detail);
    lines.push_back(std::string("overall: ") + (r.all_passed() ? "PASS" : "FAIL"));
    write_lines(dir / "report.txt", lines);
}

ExperimentReport do_run(const ExperimentConfig& c, const std::filesystem::path& dir) {
    ExperimentReport report;
    report.mode = Mode::run;
    const Problem p = c.problem();
    const Grid1D grid = finest_grid(c);
    RunOptions o;
    o.snapshot_times = c.snapshots.empty() ? std::vector<double>{0.0, c.T} : c.snapshots;
    o.track_energy = c.energy;
    double err = 0.0;
    if (p.exact)
        o.observer = [&](const StepperState& s) {
            for (std::size_t i = 0; i < grid.nodes(); ++i)
                err = std::max(err, std::abs(p.exact->u(grid.x(i), grid.t(s.k)) - s.u_curr[i]));
        };
    const RunResult res = run(p.initial, grid, p.params, o);

    {
        std::ofstream out(dir / "snapshots.csv");
        out << 'x';
        for (const auto& s : res.snapshots) out << ",t=" << format_real(s.t);
        out << '\n';
        for (std::size_t i = 0; i < grid.nodes(); ++i) {
            out << format_real(grid.x(i));
            for (const auto& s : res.snapshots) out << ',' << format_real(s.u[i]);
            out << '\n';
        }
        report.files.push_back("snapshots.csv");
    }
    if (c.energy) {
        std::ofstream out(dir / "energy.csv");
        out << "t,E\n";
        for (const auto& [t, e] : res.energy_series) out << format_real(t) << ',' << format_real(e) << '\n';
        report.files.push_back("energy.csv");
    }

    report.notes.push_back("M=" + std::to_string(grid.nodes()) + " N=" + std::to_string(grid.steps()) +
                           " h=" + short_real(grid.h()) + " tau=" + short_real(grid.tau()));
    if (p.exact) report.notes.push_back("max-norm error against exact solution " + short_real(err));
    report.checks.push_back({"compact relation residual", res.max_v_residual <= 1e-11,
                             short_real(res.max_v_residual) + " <= 1e-11"});
    if (c.energy && p.params.conservative() && p.params.nu >= 0.0 && !res.energy_series.empty()) {
        const double e0 = res.energy_series.front().second;
        double drift = 0.0;
        for (const auto& [t, e] : res.energy_series) drift = std::max(drift, std::abs(e - e0));
        drift /= std::max(std::abs(e0), 1e-300);
        report.checks.push_back({"energy drift", drift <= c.energy_drift_tolerance,
                                 short_real(drift) + " <= " + short_real(c.energy_drift_tolerance)});
    }
    return report;
}

ExperimentReport do_convergence(const ExperimentConfig& c, const std::filesystem::path& dir, int threads) {
    ExperimentReport report;
    report.mode = Mode::convergence;
    if (c.M.size() < 2 && c.N.size() < 2)
        report.checks.push_back({"refinement chain", false, "need at least two M or two N values"});
    if (c.M.size() >= 2) {
        const auto rows = spatial_chain(c, threads);
        write_table(dir / "spatial_orders.csv", rows);
        report.files.push_back("spatial_orders.csv");
        check_chain(report, "spatial", rows, c.reference_spatial_errors, c.reference_spatial_orders,
                    c.expected_spatial_order, c.spatial_order_tolerance, c);
    }
    if (c.N.size() >= 2) {
        const auto rows = temporal_chain(c, threads);
        write_table(dir / "temporal_orders.csv", rows);
        report.files.push_back("temporal_orders.csv");
        check_chain(report, "temporal", rows, c.reference_temporal_errors, c.reference_temporal_orders,
                    c.expected_temporal_order, c.temporal_order_tolerance, c);
    }
    return report;
}

// Matches reference values to 8 significant digits: |E - ref| <= half a unit in the 8th digit.
bool eight_digits(double value, double ref) {
    const double unit = std::pow(10.0, std::floor(std::log10(std::abs(ref))) - 7.0);
    return std::abs(value - ref) <= 0.5 * unit;
}

ExperimentReport do_invariants(const ExperimentConfig& c, const std::filesystem::path& dir, int threads) {
    ExperimentReport report;
    report.mode = Mode::invariants;
    const auto traces = invariant_traces(c, threads);
    {
        std::ofstream out(dir / "energy.csv");
        out << 't';
        for (const auto& tr : traces) out << ",E(mu=" << format_real(tr.mu) << ";nu=" << format_real(tr.nu) << ')';
        out << '\n';
        for (std::size_t k = 0; k < traces.front().energy.size(); ++k) {
            out << format_real(traces.front().energy[k].first);
            for (const auto& tr : traces) out << ',' << format_real(tr.energy[k].second);
            out << '\n';
        }
        report.files.push_back("energy.csv");
    }
    const bool conservative = c.problem().params.conservative();
    for (std::size_t j = 0; j < traces.size(); ++j) {
        const auto& tr = traces[j];
        const std::string tag = "(mu, nu) = (" + short_real(tr.mu) + ", " + short_real(tr.nu) + ")";
        const double e0 = tr.energy.front().second;
        report.notes.push_back(tag + " E(0) = " + format_real(e0) + ", E(T) = " + format_real(tr.energy.back().second));
        if (j < c.reference_energy.size())
            report.checks.push_back({tag + " initial energy", eight_digits(e0, c.reference_energy[j]),
                                     format_real(e0) + " vs " + format_real(c.reference_energy[j]) +
                                         " (8 significant digits)"});
        report.checks.push_back({tag + " compact relation residual", tr.max_v_residual <= 1e-11,
                                 short_real(tr.max_v_residual) + " <= 1e-11"});
        if (!conservative) continue;
        report.checks.push_back({tag + " energy drift", tr.max_relative_drift <= c.energy_drift_tolerance,
                                 short_real(tr.max_relative_drift) + " <= " + short_real(c.energy_drift_tolerance)});
        report.checks.push_back({tag + " boundedness", tr.max_l2 <= tr.bound,
                                 "max ||u^k|| " + short_real(tr.max_l2) + " <= " + short_real(tr.bound)});
    }
    return report;
}

ExperimentReport do_stability(const ExperimentConfig& c, const std::filesystem::path& dir, int threads) {
    ExperimentReport report;
    report.mode = Mode::stability;
    if (c.perturbation > 0.0) {
        const GapResult g = perturbation_gap(c, threads);
        std::ofstream out(dir / "stability_gap.csv");
        out << "t,gap,half_gap\n";
        for (std::size_t k = 0; k < g.gap.size(); ++k)
            out << format_real(g.gap[k].first) << ',' << format_real(g.gap[k].second) << ','
                << format_real(g.half_gap[k].second) << '\n';
        report.files.push_back("stability_gap.csv");
        report.checks.push_back({"gap bound", g.ratio_to_perturbation <= c.gap_bound,
                                 "sup |eta|_1 / |phi0|_1 = " + short_real(g.ratio_to_perturbation) + " <= " +
                                     short_real(c.gap_bound)});
        report.checks.push_back({"gap linear scaling", std::abs(g.halving_ratio / 2.0 - 1.0) <= c.gap_linearity_tolerance,
                                 "halving ratio " + short_real(g.halving_ratio) + " vs 2 (allowed " +
                                     percent(c.gap_linearity_tolerance) + ")"});
        return report;
    }
    const auto errors = stability_sweep(c, threads);
    {
        std::ofstream out(dir / "stability.csv");
        out << 'h';
        for (std::size_t N : c.N) out << ",tau=" << format_real(c.T / static_cast<double>(N));
        out << '\n';
        for (std::size_t m = 0; m < c.M.size(); ++m) {
            out << format_real((c.x_right - c.x_left) / static_cast<double>(c.M[m]));
            for (std::size_t n = 0; n < c.N.size(); ++n) out << ',' << format_real(errors[n][m]);
            out << '\n';
        }
        report.files.push_back("stability.csv");
    }
    for (std::size_t n = 0; n < c.N.size(); ++n) {
        const auto& e = errors[n];
        const std::string tag = "tau " + short_real(c.T / static_cast<double>(c.N[n]));
        const double tail = e.size() >= 2 ? std::abs(e.back() / e[e.size() - 2] - 1.0) : 0.0;
        double worst_rise = 0.0;
        for (std::size_t m = 1; m < e.size(); ++m) worst_rise = std::max(worst_rise, e[m] / e[m - 1] - 1.0);
        report.checks.push_back({tag + " plateau", e.size() >= 2 && tail <= c.plateau_tolerance,
                                 "level " + short_real(e.back()) + ", change over the finest step " + percent(tail) +
                                     " (allowed " + percent(c.plateau_tolerance) + ")"});
        report.checks.push_back({tag + " monotone", monotone_then_flat(e, c.plateau_tolerance),
                                 "largest rise as h halves " + percent(worst_rise) + " (allowed " +
                                     percent(c.plateau_tolerance) + ")"});
    }
    return report;
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::run: return "run";
        case Mode::convergence: return "convergence";
        case Mode::invariants: return "invariants";
        case Mode::stability: return "stability";
    }
    return "run";
}

bool ExperimentReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", value);
    return buf;
}

Grid1D finest_grid(const ExperimentConfig& config) {
    return make_grid(config, config.M.back(), config.N.back());
}

std::vector<ConvergenceRow> spatial_chain(const ExperimentConfig& c, int threads) {
    const Problem p = c.problem();
    const std::size_t N = c.N.back();
    const double L = c.x_right - c.x_left;
    std::vector<std::pair<double, double>> errors(c.M.size());
    if (use_exact(c, p)) {
        for_each_case(c.M.size(), threads, [&](std::size_t j) {
            errors[j] = {L / static_cast<double>(c.M[j]), exact_error(p, make_grid(c, c.M[j], N))};
        });
    } else {
        std::vector<std::size_t> Ms = c.M;
        Ms.push_back(2 * c.M.back());
        std::vector<std::vector<PeriodicField>> runs(Ms.size());
        for_each_case(Ms.size(), threads, [&](std::size_t j) { runs[j] = trajectory(p, make_grid(c, Ms[j], N)); });
        for (std::size_t j = 0; j < c.M.size(); ++j)
            errors[j] = {L / static_cast<double>(c.M[j]), posterior_spatial_error(runs[j], runs[j + 1])};
    }
    return convergence_table(errors);
}

std::vector<ConvergenceRow> temporal_chain(const ExperimentConfig& c, int threads) {
    const Problem p = c.problem();
    const std::size_t M = c.M.back();
    std::vector<std::pair<double, double>> errors(c.N.size());
    if (use_exact(c, p)) {
        for_each_case(c.N.size(), threads, [&](std::size_t j) {
            errors[j] = {c.T / static_cast<double>(c.N[j]), exact_error(p, make_grid(c, M, c.N[j]))};
        });
    } else {
        std::vector<std::size_t> Ns = c.N;
        Ns.push_back(2 * c.N.back());
        std::vector<std::vector<PeriodicField>> runs(Ns.size());
        for_each_case(Ns.size(), threads, [&](std::size_t j) { runs[j] = trajectory(p, make_grid(c, M, Ns[j])); });
        for (std::size_t j = 0; j < c.N.size(); ++j)
            errors[j] = {c.T / static_cast<double>(c.N[j]), posterior_temporal_error(runs[j], runs[j + 1])};
    }
    return convergence_table(errors);
}

std::vector<InvariantTrace> invariant_traces(const ExperimentConfig& c, int threads) {
    std::vector<std::pair<double, double>> pairs = c.mu_nu;
    if (pairs.empty()) pairs.emplace_back(c.mu, c.nu);
    std::vector<InvariantTrace> traces(pairs.size());
    const Grid1D grid = finest_grid(c);
    for_each_case(pairs.size(), threads, [&](std::size_t j) {
        const auto [mu, nu] = pairs[j];
        const Problem p = c.problem(mu, nu);
        InvariantTrace& tr = traces[j];
        tr.mu = mu;
        tr.nu = nu;
        const PeriodicField u0 = sample(grid, p.initial);
        tr.bound = boundedness_bound(u0, compact_second_derivative(u0, grid.h()), grid.h(), mu);
        RunOptions o;
        o.observer = [&](const StepperState& s) {
            tr.max_l2 = std::max(tr.max_l2, std::sqrt(l2_norm_squared(s.u_curr, grid.h())));
        };
        RunResult res = run(u0, grid, p.params, o);
        tr.energy = std::move(res.energy_series);
        tr.max_v_residual = res.max_v_residual;
        const double e0 = tr.energy.front().second;
        for (const auto& [t, e] : tr.energy)
            tr.max_relative_drift = std::max(tr.max_relative_drift, std::abs(e - e0) / std::abs(e0));
    });
    return traces;
}

std::vector<std::vector<double>> stability_sweep(const ExperimentConfig& c, int threads) {
    const Problem p = c.problem();
    if (!p.exact) throw InvalidInput("stability sweep needs a problem with an exact solution");
    const std::size_t nm = c.M.size();
    std::vector<std::vector<double>> errors(c.N.size(), std::vector<double>(nm));
    for_each_case(c.N.size() * nm, threads, [&](std::size_t idx) {
        const std::size_t n = idx / nm, m = idx % nm;
        errors[n][m] = exact_error(p, make_grid(c, c.M[m], c.N[n]));
    });
    return errors;
}

bool monotone_then_flat(const std::vector<double>& errors, double tolerance) {
    if (errors.size() < 2) return false;
    for (std::size_t j = 1; j < errors.size(); ++j)
        if (errors[j] > errors[j - 1] * (1.0 + tolerance)) return false;
    const double a = errors[errors.size() - 2], b = errors.back();
    return std::abs(b - a) <= tolerance * a;
}

GapResult perturbation_gap(const ExperimentConfig& c, int threads) {
    const Problem p = c.problem();
    const Grid1D grid = finest_grid(c);
    const double eps = c.perturbation;
    const double x0 = c.x_left, L = c.x_right - c.x_left;
    auto shape = [=](double x) { return std::sin(2.0 * std::numbers::pi * (x - x0) / L); };
    const PeriodicField base0 = sample(grid, p.initial);
    const PeriodicField phi0 = sample(grid, shape);
    const std::vector<PeriodicField> initial{base0, axpy(base0, eps, phi0), axpy(base0, 0.5 * eps, phi0)};
    std::vector<std::vector<PeriodicField>> runs(3);
    for_each_case(3, threads, [&](std::size_t j) {
        RunOptions o;
        o.track_energy = false;
        o.record_trajectory = true;
        runs[j] = run(initial[j], grid, p.params, o).trajectory;
    });
    GapResult g;
    g.gap = stability_gap(runs[0], runs[1], grid);
    g.half_gap = stability_gap(runs[0], runs[2], grid);
    g.perturbation_h1 = eps * std::sqrt(h1_semi_squared(phi0, grid.h()));
    auto sup = [](const std::vector<std::pair<double, double>>& s) {
        double m = 0.0;
        for (const auto& [t, v] : s) m = std::max(m, v);
        return m;
    };
    g.ratio_to_perturbation = g.perturbation_h1 > 0.0 ? sup(g.gap) / g.perturbation_h1 : 0.0;
    const double half = sup(g.half_gap);
    g.halving_ratio = half > 0.0 ? sup(g.gap) / half : 0.0;
    return g;
}

ExperimentReport run_experiment(const ExperimentConfig& config, Mode mode, const std::filesystem::path& out_dir,
                                int threads) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::remove(out_dir / "STALE");
    ExperimentReport report;
    try {
        switch (mode) {
            case Mode::run: report = do_run(config, out_dir); break;
            case Mode::convergence: report = do_convergence(config, out_dir, threads); break;
            case Mode::invariants: report = do_invariants(config, out_dir, threads); break;
            case Mode::stability: report = do_stability(config, out_dir, threads); break;
        }
    } catch (const Error& e) {
        if (!dynamic_cast<const Divergence*>(&e) && !dynamic_cast<const SingularSystem*>(&e)) throw;
        const std::string msg = std::string("solver failure: ") + e.what();
        write_lines(out_dir / "STALE", {msg});
        write_lines(out_dir / "report.txt", {"mode: " + to_string(mode), "STALE " + msg,
                                             "other files in this directory are from an earlier run"});
        throw;
    }
    write_report(out_dir, config, report);
    report.files.push_back("report.txt");
    return report;
}

}  // namespace bbmb
