#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bbmb/grid_ops.hpp"
#include "bbmb/kernels.hpp"
#include "test_support.hpp"

using namespace bbmb;
using bbmb::test::max_abs;
using bbmb::test::max_diff;
using bbmb::test::random_field;

namespace {

const PeriodicField kZigzag{1.0, 0.0, -1.0, 0.0};

void expect_field(const PeriodicField& got, std::initializer_list<double> want, double tol = 1e-14) {
    ASSERT_EQ(got.size(), want.size());
    std::size_t i = 0;
    for (double w : want) EXPECT_NEAR(got[i++], w, tol) << "index " << i - 1;
}

}  // namespace

TEST(GridTest, StepsAndValidation) {
    Grid1D g(0.0, 2.0, 16, 1.0, 5000);
    EXPECT_DOUBLE_EQ(g.h(), 0.125);
    EXPECT_DOUBLE_EQ(g.tau(), 1.0 / 5000);
    EXPECT_DOUBLE_EQ(g.x(3), 0.375);
    EXPECT_THROW(Grid1D(0.0, 1.0, 3, 1.0, 10), InvalidInput);
    EXPECT_THROW(Grid1D(0.0, 1.0, 8, 1.0, 1), InvalidInput);
    EXPECT_THROW(Grid1D(1.0, 1.0, 8, 1.0, 10), InvalidInput);
    EXPECT_THROW(Grid1D(0.0, 1.0, 8, 0.0, 10), InvalidInput);
}

TEST(PeriodicFieldTest, WrapAndRotate) {
    PeriodicField f{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(f.wrapped(-1), 4.0);
    EXPECT_EQ(f.wrapped(4), 1.0);
    EXPECT_EQ(f.rotated(1), (PeriodicField{2.0, 3.0, 4.0, 1.0}));
}

TEST(GridOpsTest, HandValuesOnFourNodes) {
    expect_field(delta2x(kZigzag, 0.5), {-8.0, 0.0, 8.0, 0.0});
    expect_field(central_dx(kZigzag, 0.5), {0.0, -2.0, 0.0, 2.0});
    expect_field(delta_x_half(kZigzag, 0.5), {2.0, -2.0, -2.0, 2.0});
    expect_field(psi(kZigzag, kZigzag, 0.5), {0.0, 0.0, 0.0, 0.0});
    EXPECT_NEAR(inner_product(kZigzag, kZigzag, 0.5), 1.0, 1e-15);

    const DiscreteNorms n = discrete_norms(kZigzag, 0.5);
    EXPECT_NEAR(n.l2, 1.0, 1e-15);
    EXPECT_NEAR(n.h1_semi, std::sqrt(8.0), 1e-14);
    EXPECT_NEAR(n.max, 1.0, 0.0);
}

TEST(GridOpsTest, ConstantsAreAnnihilated) {
    const PeriodicField c(4, 3.5);
    expect_field(delta2x(c, 0.7), {0, 0, 0, 0});
    expect_field(central_dx(c, 0.7), {0, 0, 0, 0});
    expect_field(delta_x_half(c, 0.7), {0, 0, 0, 0});
    const DiscreteNorms z = discrete_norms(PeriodicField(4, 0.0), 0.5);
    EXPECT_EQ(z.l2, 0.0);
    EXPECT_EQ(z.h1_semi, 0.0);
    EXPECT_EQ(z.max, 0.0);
}

TEST(GridOpsTest, PsiWithConstantCoefficient) {
    std::mt19937_64 rng(11);
    const PeriodicField b = random_field(rng, 9);
    const double c = 1.7, h = 0.3;
    const PeriodicField got = psi(PeriodicField(9, c), b, h);
    const PeriodicField want = axpy(PeriodicField(9, 0.0), 2.0 * c / 3.0, central_dx(b, h));
    EXPECT_LT(max_diff(got, want), 1e-13);
}

TEST(GridOpsTest, PsiMatchesDefinitionalForm) {
    // (1/3)[a_i Delta_x b_i + Delta_x(ab)_i]
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t M = 4 + trial;
        const double h = 0.1 + 0.01 * trial;
        const PeriodicField a = random_field(rng, M), b = random_field(rng, M);
        PeriodicField ab(M);
        for (std::size_t i = 0; i < M; ++i) ab[i] = a[i] * b[i];
        const PeriodicField db = central_dx(b, h), dab = central_dx(ab, h);
        PeriodicField want(M);
        for (std::size_t i = 0; i < M; ++i) want[i] = (a[i] * db[i] + dab[i]) / 3.0;
        EXPECT_LT(max_diff(psi(a, b, h), want), 1e-13 * (1.0 + max_abs(want)));
    }
}

TEST(GridOpsTest, LengthMismatchIsRejected) {
    EXPECT_THROW(psi(PeriodicField(5), PeriodicField(6), 0.1), InvalidInput);
    EXPECT_THROW(inner_product(PeriodicField(5), PeriodicField(6), 0.1), InvalidInput);
    EXPECT_THROW(delta2x(PeriodicField(5), 0.0), InvalidInput);
}

// Skew-symmetry, summation-by-parts and the product rule, each relative to
// the largest intermediate magnitude, on 500 random fields.
TEST(GridOpsPropertyTest, DiscreteIdentitiesOnRandomFields) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size_dist(4, 200);
    std::uniform_real_distribution<double> h_dist(0.01, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t M = size_dist(rng);
        const double h = h_dist(rng);
        const PeriodicField u = random_field(rng, M), w = random_field(rng, M, 3.0);
        const PeriodicField du = central_dx(u, h), d2u = delta2x(u, h), p = psi(u, w, h);
        const PeriodicField hu = delta_x_half(u, h), hw = delta_x_half(w, h);

        auto scale = [&](const PeriodicField& a, const PeriodicField& b) {
            double s = 0.0;
            for (std::size_t i = 0; i < M; ++i) s += std::abs(a[i] * b[i]);
            return h * s;
        };
        EXPECT_LE(std::abs(inner_product(p, w, h)), 1e-13 * scale(p, w)) << "psi skew, trial " << trial;
        EXPECT_LE(std::abs(inner_product(du, u, h)), 1e-13 * scale(du, u)) << "Delta skew, trial " << trial;
        EXPECT_LE(std::abs(inner_product(du, d2u, h)), 1e-13 * scale(du, d2u)) << "trial " << trial;

        const double sbp = inner_product(d2u, w, h) + h1_inner_product(u, w, h);
        EXPECT_LE(std::abs(sbp), 1e-13 * (scale(d2u, w) + scale(hu, hw))) << "sbp, trial " << trial;

        // Delta_x(uw)_i = 1/2 (u_{i+1} - u_i)/h w_{i+1} + 1/2 (u_i - u_{i-1})/h w_{i-1} + u_i Delta_x w_i
        PeriodicField uw(M);
        for (std::size_t i = 0; i < M; ++i) uw[i] = u[i] * w[i];
        const PeriodicField lhs = central_dx(uw, h), dw = central_dx(w, h);
        for (std::size_t i = 0; i < M; ++i) {
            const double t1 = 0.5 * hu.wrapped(static_cast<std::ptrdiff_t>(i) + 1) * w.wrapped(static_cast<std::ptrdiff_t>(i) + 1);
            const double t2 = 0.5 * hu[i] * w.wrapped(static_cast<std::ptrdiff_t>(i) - 1);
            const double t3 = u[i] * dw[i];
            const double mag = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(lhs[i]);
            ASSERT_LE(std::abs(lhs[i] - (t1 + t2 + t3)), 1e-13 * mag) << "product rule, trial " << trial;
        }

        EXPECT_LE(std::sqrt(h1_semi_squared(u, h)), (2.0 / h) * std::sqrt(l2_norm_squared(u, h)) * (1 + 1e-14));
    }
}

TEST(GridOpsPropertyTest, SeminormMatchesHalfDifferences) {
    std::mt19937_64 rng(5);
    const double h = 0.25;
    const PeriodicField u = random_field(rng, 37);
    const PeriodicField d = delta_x_half(u, h);
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * d[i];
    EXPECT_NEAR(h1_semi_squared(u, h), h * s, 1e-13 * h * s);
}

TEST(GridOpsPropertyTest, SecondDifferenceIsSecondOrder) {
    const double L = 3.0;
    const double k = 2.0 * std::numbers::pi / L;
    auto err = [&](std::size_t M) {
        const Grid1D g(0.0, L, M, 1.0, 2);
        const PeriodicField u = sample(g, [&](double x) { return std::sin(k * x); });
        const PeriodicField exact = sample(g, [&](double x) { return -k * k * std::sin(k * x); });
        return max_diff(delta2x(u, g.h()), exact);
    };
    const double r = err(64) / err(128);
    EXPECT_GT(r, 3.8);
    EXPECT_LT(r, 4.2);
}

// Compact corrections with exact second-derivative samples are fourth order.
TEST(GridOpsPropertyTest, CompactApproximationsAreFourthOrder) {
    const double L = 2.0;
    const double k = 2.0 * std::numbers::pi / L;
    struct Errors {
        double product, first, second;
    };
    auto errors = [&](std::size_t M) {
        const Grid1D g(0.0, L, M, 1.0, 2);
        const double h = g.h();
        const PeriodicField F = sample(g, [&](double x) { return std::sin(k * x); });
        const PeriodicField G = sample(g, [&](double x) { return -k * k * std::sin(k * x); });
        const PeriodicField ffx = sample(g, [&](double x) { return k * std::sin(k * x) * std::cos(k * x); });
        const PeriodicField fx = sample(g, [&](double x) { return k * std::cos(k * x); });
        const PeriodicField prod = axpy(psi(F, F, h), -h * h / 2.0, psi(G, F, h));
        const PeriodicField first = axpy(central_dx(F, h), -h * h / 6.0, central_dx(G, h));
        const PeriodicField second = axpy(delta2x(F, h), -h * h / 12.0, delta2x(G, h));
        return Errors{max_diff(prod, ffx), max_diff(first, fx), max_diff(second, G)};
    };
    const Errors e32 = errors(32), e64 = errors(64), e128 = errors(128);
    for (const auto& [coarse, fine] : {std::pair{e32, e64}, std::pair{e64, e128}}) {
        for (double r : {coarse.product / fine.product, coarse.first / fine.first, coarse.second / fine.second}) {
            EXPECT_GE(r, 12.0);
            EXPECT_LE(r, 20.0);
        }
    }
}

TEST(GridOpsPropertyTest, TranslationEquivariance) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t M = 4 + trial * 3;
        const std::ptrdiff_t s = trial % static_cast<int>(M);
        const double h = 0.37;
        const PeriodicField u = random_field(rng, M), w = random_field(rng, M);
        const PeriodicField ur = u.rotated(s), wr = w.rotated(s);
        EXPECT_EQ(delta2x(ur, h), delta2x(u, h).rotated(s));
        EXPECT_EQ(central_dx(ur, h), central_dx(u, h).rotated(s));
        EXPECT_EQ(delta_x_half(ur, h), delta_x_half(u, h).rotated(s));
        EXPECT_EQ(psi(ur, wr, h), psi(u, w, h).rotated(s));
        const double ip = inner_product(u, w, h);
        EXPECT_NEAR(inner_product(ur, wr, h), ip, 1e-14 * (1.0 + std::abs(ip)));
    }
}

TEST(KernelsTest, ParallelMatchesSerial) {
    std::mt19937_64 rng(3);
    const std::size_t M = 3 * kernels::kParallelThreshold + 17;
    const double h = 1e-3;
    const PeriodicField a = random_field(rng, M), b = random_field(rng, M);
    std::vector<double> s(M), p(M);

    kernels::serial::second_diff(a.span(), h, s);
    kernels::omp::second_diff(a.span(), h, p);
    EXPECT_EQ(s, p);
    kernels::serial::central_diff(a.span(), h, s);
    kernels::omp::central_diff(a.span(), h, p);
    EXPECT_EQ(s, p);
    kernels::serial::backward_diff(a.span(), h, s);
    kernels::omp::backward_diff(a.span(), h, p);
    EXPECT_EQ(s, p);
    kernels::serial::psi(a.span(), b.span(), h, s);
    kernels::omp::psi(a.span(), b.span(), h, p);
    EXPECT_EQ(s, p);

    EXPECT_EQ(kernels::serial::max_abs(a.span()), kernels::omp::max_abs(a.span()));
    const double ds = kernels::serial::dot(a.span(), b.span());
    EXPECT_NEAR(kernels::omp::dot(a.span(), b.span()), ds, 1e-13 * std::abs(ds));
    const double dd = kernels::serial::diff_dot(a.span(), b.span());
    EXPECT_NEAR(kernels::omp::diff_dot(a.span(), b.span()), dd, 1e-13 * std::abs(dd));
}

TEST(KernelsTest, ReductionsIndependentOfThreadCount) {
    std::mt19937_64 rng(4);
    const PeriodicField a = random_field(rng, 100003), b = random_field(rng, 100003);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double d1 = kernels::omp::dot(a.span(), b.span());
    const double e1 = kernels::omp::diff_dot(a.span(), b.span());
    omp_set_num_threads(4);
    const double d4 = kernels::omp::dot(a.span(), b.span());
    const double e4 = kernels::omp::diff_dot(a.span(), b.span());
    omp_set_num_threads(saved);
    EXPECT_EQ(d1, d4);
    EXPECT_EQ(e1, e4);
}
