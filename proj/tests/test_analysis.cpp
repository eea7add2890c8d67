#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bbmb/analysis.hpp"
#include "bbmb/energy.hpp"
#include "bbmb/grid_ops.hpp"
#include "bbmb/problems.hpp"
#include "bbmb/scheme.hpp"
#include "test_support.hpp"

using namespace bbmb;
using bbmb::test::random_field;

namespace {

std::vector<PeriodicField> trajectory(const Problem& p, std::size_t M, std::size_t N, double T) {
    const Grid1D g(p.x_left, p.x_right, M, T, N);
    RunOptions o;
    o.record_trajectory = true;
    o.track_energy = false;
    return run(p.initial, g, p.params, o).trajectory;
}

}  // namespace

TEST(EnergyTest, ZeroFieldsGiveZero) {
    const PeriodicField z(8, 0.0);
    EXPECT_EQ(energy_pair(z, z, z, z, EnergyLedger{}, 0.1, 1.0), 0.0);
    EXPECT_EQ(initial_energy(z, z, 0.1, 1.0), 0.0);
}

TEST(EnergyTest, BracketMatchesNorms) {
    std::mt19937_64 rng(4);
    const double h = 0.2;
    const PeriodicField u = random_field(rng, 20), v = random_field(rng, 20);
    const double want = h1_semi_squared(u, h) + h * h / 12.0 * l2_norm_squared(v, h) -
                        std::pow(h, 4) / 144.0 * h1_semi_squared(v, h);
    EXPECT_NEAR(dissipation_bracket(u, v, h), want, 1e-14 * std::abs(want));
    // the v part is bounded below by (h^2/36)||v||^2 since |v|_1^2 <= (4/h^2)||v||^2
    EXPECT_GE(dissipation_bracket(PeriodicField(20, 0.0), v, h), h * h / 36.0 * l2_norm_squared(v, h) * (1 - 1e-14));
}

TEST(EnergyTest, SolitonInitialEnergyIsConserved) {
    // (mu, nu) = (1, 1) and (1e-4, 1e-4) on h = 1/5, tau = 1/256, to t = 8.
    const struct {
        double mu, nu, e0;
    } cases[] = {{1.0, 1.0, 1.399999972059210}, {1e-4, 1e-4, 1.333339999885745}};
    for (const auto& c : cases) {
        const Problem p = soliton_problem(c.mu, c.nu);
        const Grid1D g(p.x_left, p.x_right, 250, 8.0, 2048);
        const RunResult r = run(p.initial, g, p.params);
        const double e0 = r.energy_series.front().second;
        EXPECT_NEAR(e0, c.e0, 5e-8);
        for (const auto& [t, e] : r.energy_series) EXPECT_NEAR(e, e0, 1e-9 * e0);
    }
}

TEST(BoundednessTest, ZeroDataGivesZeroBound) {
    const PeriodicField z(10, 0.0);
    EXPECT_EQ(boundedness_bound(z, z, 0.1, 1.0), 0.0);
}

TEST(BoundednessTest, SolitonNormStaysBelowBound) {
    const Problem p = soliton_problem();
    const Grid1D g(p.x_left, p.x_right, 250, 8.0, 2048);
    const PeriodicField u0 = sample(g, p.initial);
    const PeriodicField v0 = compact_second_derivative(u0, g.h());
    const double bound = boundedness_bound(u0, v0, g.h(), p.params.mu);
    double worst = 0.0;
    RunOptions o;
    o.track_energy = false;
    o.observer = [&](const StepperState& s) { worst = std::max(worst, std::sqrt(l2_norm_squared(s.u_curr, g.h()))); };
    run(u0, g, p.params, o);
    EXPECT_LE(worst, bound);
    EXPECT_LT(boundedness_bound(u0, v0, g.h(), 0.5), bound);
    EXPECT_GT(boundedness_bound(u0, v0, g.h(), 2.0), bound);
}

TEST(MaxNormErrorTest, ExactAndOffset) {
    const Grid1D g(0.0, 1.0, 4, 1.0, 2);
    auto f = [](double x, double t) { return x + t; };
    std::vector<PeriodicField> levels;
    for (std::size_t k = 0; k <= 2; ++k) levels.push_back(sample(g, [&](double x) { return f(x, g.t(k)); }));
    EXPECT_EQ(max_norm_error(levels, g, f), 0.0);
    levels[1][2] += 0.25;
    EXPECT_DOUBLE_EQ(max_norm_error(levels, g, f), 0.25);
    levels.pop_back();
    EXPECT_THROW(max_norm_error(levels, g, f), InvalidInput);
}

TEST(MaxNormErrorTest, ManufacturedTemporalRow) {
    const Problem p = manufactured_problem();
    const Grid1D g(p.x_left, p.x_right, 100, 1.0, 40);  // h = 1/50, tau = 1/40
    RunOptions o;
    o.record_trajectory = true;
    o.track_energy = false;
    const auto levels = run(p.initial, g, p.params, o).trajectory;
    EXPECT_NEAR(max_norm_error(levels, g, p.exact->u) / 4.8670e-4, 1.0, 0.2);
}

TEST(PosteriorTest, IdenticalDynamicsGiveZero) {
    const std::vector<PeriodicField> coarse(3, PeriodicField{1, 2, 3, 4});
    const std::vector<PeriodicField> fine(3, PeriodicField{1, 9, 2, 9, 3, 9, 4, 9});
    EXPECT_EQ(posterior_spatial_error(coarse, fine), 0.0);
    std::vector<PeriodicField> fine_t(5, PeriodicField{1, 2, 3, 4});
    EXPECT_EQ(posterior_temporal_error(coarse, fine_t), 0.0);
    fine_t[4][0] = 2.0;  // compared against coarse level 2
    EXPECT_EQ(posterior_temporal_error(coarse, fine_t), 1.0);
    fine_t[3][0] = 7.0;  // odd fine level: never compared
    EXPECT_EQ(posterior_temporal_error(coarse, fine_t), 1.0);
}

TEST(PosteriorTest, IncompatibleRunsAreRejected) {
    const std::vector<PeriodicField> coarse(3, PeriodicField(4));
    EXPECT_THROW(posterior_spatial_error(coarse, std::vector<PeriodicField>(3, PeriodicField(6))), InvalidInput);
    EXPECT_THROW(posterior_spatial_error(coarse, std::vector<PeriodicField>(4, PeriodicField(8))), InvalidInput);
    EXPECT_THROW(posterior_temporal_error(coarse, std::vector<PeriodicField>(4, PeriodicField(4))), InvalidInput);
    EXPECT_THROW(posterior_temporal_error(coarse, std::vector<PeriodicField>(5, PeriodicField(8))), InvalidInput);
}

TEST(PosteriorTest, SolitonSpatialRow) {
    const Problem p = soliton_problem();
    const double f = posterior_spatial_error(trajectory(p, 80, 2000, 1.0), trajectory(p, 160, 2000, 1.0));
    EXPECT_NEAR(f / 3.2284e-5, 1.0, 0.2);  // h = 5/8
}

TEST(PosteriorTest, SolitonTemporalRow) {
    const Problem p = soliton_problem();
    const double g = posterior_temporal_error(trajectory(p, 100, 40, 1.0), trajectory(p, 100, 80, 1.0));
    EXPECT_NEAR(g / 5.4491e-6, 1.0, 0.2);  // tau = 1/40
}

TEST(ConvergenceTableTest, Orders) {
    const std::vector<std::pair<double, double>> e{{1.0, 1.0}, {0.5, 0.25}, {0.25, 0.25}};
    const auto rows = convergence_table(e);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[0].order);
    EXPECT_DOUBLE_EQ(*rows[1].order, 2.0);
    EXPECT_DOUBLE_EQ(*rows[2].order, 0.0);
    EXPECT_THROW(convergence_table(std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.3, 0.1}}), InvalidInput);
}

TEST(ConvergenceTableTest, ReferenceColumnOrders) {
    const std::vector<std::pair<double, double>> e{
        {1.0 / 4, 9.0677e-3}, {1.0 / 8, 5.9120e-4}, {1.0 / 16, 3.7491e-5}, {1.0 / 32, 2.3538e-6}, {1.0 / 64, 1.2326e-7}};
    const auto rows = convergence_table(e);
    const double want[] = {3.9390, 3.9790, 3.9935, 4.2552};
    for (std::size_t j = 1; j < rows.size(); ++j) EXPECT_NEAR(*rows[j].order, want[j - 1], 5e-4);
    EXPECT_GT(fitted_order(rows), 3.9);
    EXPECT_LT(fitted_order(rows), 4.2);
}

TEST(StabilityGapTest, ZeroPerturbationAndLength) {
    const Grid1D g(0.0, 1.0, 4, 1.0, 2);
    const std::vector<PeriodicField> a(3, PeriodicField{1, 2, 3, 4});
    for (const auto& [t, v] : stability_gap(a, a, g)) EXPECT_EQ(v, 0.0);
    std::vector<PeriodicField> b = a;
    b[2] = PeriodicField{2, 2, 3, 4};
    const auto gap = stability_gap(a, b, g);
    EXPECT_DOUBLE_EQ(gap[2].first, 1.0);
    EXPECT_NEAR(gap[2].second, std::sqrt(h1_semi_squared(PeriodicField{1, 0, 0, 0}, 0.25)), 1e-15);
    EXPECT_THROW(stability_gap(a, std::vector<PeriodicField>(2, PeriodicField(4)), g), InvalidInput);
}
