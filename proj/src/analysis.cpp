#include "bbmb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbmb/grid_ops.hpp"

namespace bbmb {

double boundedness_bound(const PeriodicField& u0, const PeriodicField& v0, double h, double mu) {
    const double h2 = h * h;
    return 2.0 * (std::sqrt(l2_norm_squared(u0, h)) + mu * h1_semi_squared(u0, h) +
                  mu * h2 / 12.0 * l2_norm_squared(v0, h) - mu * h2 * h2 / 144.0 * h1_semi_squared(v0, h));
}

double max_norm_error(std::span<const PeriodicField> levels, const Grid1D& grid,
                      const std::function<double(double, double)>& exact) {
    if (levels.size() != grid.steps() + 1)
        throw InvalidInput("max_norm_error: expected N+1 levels");
    double err = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k].size() != grid.nodes()) throw InvalidInput("max_norm_error: level size mismatch");
        const double t = grid.t(k);
        for (std::size_t i = 0; i < grid.nodes(); ++i)
            err = std::max(err, std::abs(exact(grid.x(i), t) - levels[k][i]));
    }
    return err;
}

double posterior_spatial_error(std::span<const PeriodicField> coarse,
                               std::span<const PeriodicField> fine) {
    if (coarse.empty() || coarse.size() != fine.size())
        throw InvalidInput("posterior_spatial_error: runs must have the same number of levels");
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        if (fine[k].size() != 2 * coarse[k].size())
            throw InvalidInput("posterior_spatial_error: fine grid must have exactly 2M nodes");
        for (std::size_t i = 0; i < coarse[k].size(); ++i)
            err = std::max(err, std::abs(coarse[k][i] - fine[k][2 * i]));
    }
    return err;
}

double posterior_temporal_error(std::span<const PeriodicField> coarse,
                                std::span<const PeriodicField> fine) {
    if (coarse.empty() || fine.size() != 2 * (coarse.size() - 1) + 1)
        throw InvalidInput("posterior_temporal_error: fine run must take exactly 2N steps");
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        if (fine[2 * k].size() != coarse[k].size())
            throw InvalidInput("posterior_temporal_error: node counts differ");
        for (std::size_t i = 0; i < coarse[k].size(); ++i)
            err = std::max(err, std::abs(coarse[k][i] - fine[2 * k][i]));
    }
    return err;
}

std::vector<ConvergenceRow> convergence_table(std::span<const std::pair<double, double>> errors) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(errors.size());
    for (std::size_t j = 0; j < errors.size(); ++j) {
        const auto [step, error] = errors[j];
        ConvergenceRow row{step, error, std::nullopt};
        if (j > 0) {
            const double ratio = errors[j - 1].first / step;
            if (std::abs(ratio - 2.0) > 1e-9)
                throw InvalidInput("convergence_table: steps must halve, row " + std::to_string(j));
            row.order = std::log2(errors[j - 1].second / error);
        }
        rows.push_back(row);
    }
    return rows;
}

double fitted_order(std::span<const ConvergenceRow> rows) {
    if (rows.size() < 2) throw InvalidInput("fitted_order: need at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(r.step), y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<std::pair<double, double>> stability_gap(std::span<const PeriodicField> base,
                                                     std::span<const PeriodicField> perturbed,
                                                     const Grid1D& grid) {
    if (base.size() != perturbed.size())
        throw InvalidInput("stability_gap: runs have different lengths");
    std::vector<std::pair<double, double>> out;
    out.reserve(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        if (base[k].size() != grid.nodes() || perturbed[k].size() != grid.nodes())
            throw InvalidInput("stability_gap: level does not match the grid");
        const PeriodicField eta = axpy(perturbed[k], -1.0, base[k]);
        out.emplace_back(grid.t(k), std::sqrt(h1_semi_squared(eta, grid.h())));
    }
    return out;
}

}  // namespace bbmb
