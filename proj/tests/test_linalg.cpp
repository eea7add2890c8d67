#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bbmb/linalg.hpp"
#include "bbmb/problems.hpp"
#include "bbmb/scheme.hpp"

using namespace bbmb;

namespace {

double rel_diff(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / den;
}

std::vector<double> flatten(const std::vector<Vec2>& x) {
    std::vector<double> out;
    for (const auto& p : x) {
        out.push_back(p[0]);
        out.push_back(p[1]);
    }
    return out;
}

ScalarCyclicTriSystem random_scalar(std::mt19937_64& rng, std::size_t M) {
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::uniform_real_distribution<double> diag(2.5, 4.0);
    std::uniform_int_distribution<int> sign(0, 1);
    ScalarCyclicTriSystem s;
    for (std::size_t i = 0; i < M; ++i) {
        s.sub.push_back(off(rng));
        s.super.push_back(off(rng));
        s.diag.push_back(sign(rng) ? diag(rng) : -diag(rng));
        s.rhs.push_back(off(rng));
    }
    return s;
}

Mat2 random_block(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng), d(rng)};
}

CyclicBlockTriSystem random_block_system(std::mt19937_64& rng, std::size_t M) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    CyclicBlockTriSystem s(M);
    for (std::size_t i = 0; i < M; ++i) {
        s.sub[i] = random_block(rng, 0.5);
        s.super[i] = random_block(rng, 0.5);
        Mat2 c = random_block(rng, 0.5);
        c.a00 += d(rng) < 0 ? -3.0 : 3.0;
        c.a11 += d(rng) < 0 ? -3.0 : 3.0;
        s.diag[i] = c;
        s.rhs[i] = {d(rng), d(rng)};
    }
    return s;
}

}  // namespace

TEST(DenseOracleTest, SmallCases) {
    DenseMatrix a(2);
    a(0, 0) = 2, a(0, 1) = 1, a(1, 0) = 1, a(1, 1) = 2;
    const auto x = solve_dense_oracle(a, {3.0, 3.0});
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);

    DenseMatrix id(5);
    for (std::size_t i = 0; i < 5; ++i) id(i, i) = 1.0;
    const std::vector<double> r{1, -2, 3, -4, 5};
    EXPECT_EQ(solve_dense_oracle(id, r), r);

    EXPECT_THROW(solve_dense_oracle(DenseMatrix(3), {1, 2, 3}), SingularSystem);
}

TEST(DenseOracleTest, RandomRoundTrip) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    DenseMatrix a(50);
    for (std::size_t r = 0; r < 50; ++r)
        for (std::size_t c = 0; c < 50; ++c) a(r, c) = d(rng) + (r == c ? 10.0 : 0.0);
    std::vector<double> x(50);
    for (auto& v : x) v = d(rng);
    EXPECT_LT(rel_diff(solve_dense_oracle(a, a.multiply(x)), x), 1e-10);
}

TEST(ScalarCyclicTest, IdentityReturnsRhs) {
    ScalarCyclicTriSystem s{std::vector<double>(6, 0.0), std::vector<double>(6, 1.0),
                            std::vector<double>(6, 0.0), {1, 2, 3, 4, 5, 6}};
    EXPECT_EQ(solve_scalar_cyclic(s), s.rhs);
}

// diag 2, off-diagonals -1 is the periodic Laplacian: constants are in its null space.
TEST(ScalarCyclicTest, PeriodicLaplacianIsSingular) {
    ScalarCyclicTriSystem s{std::vector<double>(4, -1.0), std::vector<double>(4, 2.0),
                            std::vector<double>(4, -1.0), {1, 0, 0, 0}};
    EXPECT_THROW(solve_scalar_cyclic(s), SingularSystem);
}

TEST(ScalarCyclicTest, ShiftedLaplacianMatchesOracle) {
    ScalarCyclicTriSystem s{std::vector<double>(4, -1.0), std::vector<double>(4, 3.0),
                            std::vector<double>(4, -1.0), {1, 0, 0, 0}};
    const auto x = solve_scalar_cyclic(s);
    const auto ref = solve_dense_oracle(to_dense(s), s.rhs);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12);
    // by symmetry x = (a, b, c, b): 3a - 2b = 1, 3b - a - c = 0, 3c - 2b = 0
    EXPECT_NEAR(x[0], 7.0 / 15.0, 1e-14);
    EXPECT_NEAR(x[1], 0.2, 1e-14);
    EXPECT_NEAR(x[2], 2.0 / 15.0, 1e-14);
    EXPECT_NEAR(x[3], 0.2, 1e-14);
}

TEST(ScalarCyclicTest, AgreesWithDenseOracleOnRandomSystems) {
    std::mt19937_64 rng(200);
    std::uniform_int_distribution<std::size_t> size(4, 64);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_scalar(rng, size(rng));
        SolveInfo info;
        const auto x = solve_scalar_cyclic(s, {}, &info);
        EXPECT_FALSE(info.used_dense_fallback);
        EXPECT_LT(rel_diff(x, solve_dense_oracle(to_dense(s), s.rhs)), 1e-10) << "trial " << trial;
    }
}

TEST(ScalarCyclicTest, RoundTripWithoutDiagonalDominance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t M = 5 + trial;
        ScalarCyclicTriSystem s;
        std::vector<double> x(M);
        for (std::size_t i = 0; i < M; ++i) {
            s.sub.push_back(d(rng));
            s.super.push_back(d(rng));
            s.diag.push_back(0.3 * d(rng));
            x[i] = d(rng);
        }
        s.rhs = multiply(s, x);
        SolveInfo info;
        const auto got = solve_scalar_cyclic(s, {}, &info);
        EXPECT_LT(rel_diff(got, x), 1e-8) << "trial " << trial;
        EXPECT_LT(info.relative_residual, kResidualTolerance);
    }
}

TEST(BlockCyclicTest, IdentityReturnsRhs) {
    CyclicBlockTriSystem s(5);
    for (std::size_t i = 0; i < 5; ++i) {
        s.diag[i] = Mat2::identity();
        s.rhs[i] = {double(i), -double(i)};
    }
    EXPECT_EQ(solve_cyclic_block_tridiagonal(s), s.rhs);
}

TEST(BlockCyclicTest, AgreesWithDenseOracleOnRandomSystems) {
    std::mt19937_64 rng(201);
    std::uniform_int_distribution<std::size_t> size(4, 64);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_block_system(rng, size(rng));
        SolveInfo info;
        const auto x = flatten(solve_cyclic_block_tridiagonal(s, {}, &info));
        EXPECT_FALSE(info.used_dense_fallback);
        EXPECT_LT(rel_diff(x, solve_dense_oracle(to_dense(s), flatten(s.rhs))), 1e-10) << "trial " << trial;
    }
}

TEST(BlockCyclicTest, DenseLayoutIsInterleaved) {
    CyclicBlockTriSystem s(4);
    for (std::size_t i = 0; i < 4; ++i) {
        s.sub[i] = {1, 2, 3, 4};
        s.diag[i] = {5, 6, 7, 8};
        s.super[i] = {9, 10, 11, 12};
    }
    const DenseMatrix a = to_dense(s);
    EXPECT_EQ(a(0, 0), 5);
    EXPECT_EQ(a(0, 1), 6);
    EXPECT_EQ(a(1, 0), 7);
    EXPECT_EQ(a(0, 2), 9);
    EXPECT_EQ(a(0, 6), 1);   // corner: row 0 couples to node 3
    EXPECT_EQ(a(7, 1), 12);  // corner: row 3 couples to node 0
    EXPECT_EQ(a(0, 4), 0);
}

TEST(BlockCyclicTest, InteriorStepMatchesDenseOracle) {
    const Problem p = soliton_problem();
    const Grid1D g(p.x_left, p.x_right, 20, 1.0, 50);
    StepperState s = init_state(p.initial, g, p.params);
    s = advance(s, g, p.params);
    const auto sys = assemble_interior_step(s, g, p.params);
    const auto x = flatten(solve_cyclic_block_tridiagonal(sys));
    EXPECT_LT(rel_diff(x, solve_dense_oracle(to_dense(sys), flatten(sys.rhs))), 1e-10);
}

TEST(BlockCyclicTest, SingularMatrixThrows) {
    CyclicBlockTriSystem s(4);
    for (std::size_t i = 0; i < 4; ++i) s.diag[i] = Mat2::identity();
    s.diag[2] = {1.0, 1.0, 1.0, 1.0};  // singular block, no coupling: the whole matrix is singular
    s.rhs[0] = {1.0, 0.0};
    EXPECT_THROW(solve_cyclic_block_tridiagonal(s), SingularSystem);
}

TEST(DftTest, MatchesDirectSumAndInverts) {
    for (std::size_t n : {8u, 12u}) {
        std::vector<std::complex<double>> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = {std::sin(0.3 * j + 1.0), std::cos(0.7 * j)};
        const auto X = dft(x, -1);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> want = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                want += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * k % n) / double(n));
            EXPECT_LT(std::abs(X[k] - want), 1e-12);
        }
        const auto back = dft(X, +1);
        for (std::size_t j = 0; j < n; ++j) EXPECT_LT(std::abs(back[j] / double(n) - x[j]), 1e-14);
    }
}

// (I + h^2/12 d2x) v = d2x u through the circulant route and the tridiagonal route.
TEST(CirculantTest, CompactRelationTwoRoutesAgree) {
    for (std::size_t M : {16u, 24u}) {
        std::vector<double> col(M, 0.0);
        col[0] = 5.0 / 6.0;
        col[1] = col[M - 1] = 1.0 / 12.0;
        std::vector<double> rhs(M);
        for (std::size_t i = 0; i < M; ++i) rhs[i] = std::cos(2.0 * std::numbers::pi * i / M) + 0.1 * i;
        const auto a = solve_circulant(col, rhs);
        ScalarCyclicTriSystem s{std::vector<double>(M, 1.0 / 12.0), std::vector<double>(M, 5.0 / 6.0),
                                std::vector<double>(M, 1.0 / 12.0), rhs};
        const auto b = solve_scalar_cyclic(s);
        EXPECT_LT(rel_diff(a, b), 1e-12);
    }
}
