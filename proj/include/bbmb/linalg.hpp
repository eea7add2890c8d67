/// @file linalg.hpp
/// @brief Direct solvers for the per-step periodic systems.
///
/// Row i of a cyclic (block) tridiagonal system couples node i to nodes
/// i-1, i, i+1 modulo M:
///
///     sub[i] * x[i-1] + diag[i] * x[i] + super[i] * x[i+1] = rhs[i]
///
/// so sub[0] and super[M-1] are the periodic corner entries. Both fast solvers
/// factor the acyclic core and restore the corners with a Woodbury correction
/// (rank 2 for scalars, rank 4 for 2x2 blocks). Cost is O(M).

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bbmb {

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 block.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    constexpr double det() const { return a00 * a11 - a01 * a10; }
    constexpr Vec2 operator*(const Vec2& x) const {
        return {a00 * x[0] + a01 * x[1], a10 * x[0] + a11 * x[1]};
    }
    constexpr Mat2 operator*(const Mat2& b) const {
        return {a00 * b.a00 + a01 * b.a10, a00 * b.a01 + a01 * b.a11,
                a10 * b.a00 + a11 * b.a10, a10 * b.a01 + a11 * b.a11};
    }
    constexpr Mat2 operator-(const Mat2& b) const {
        return {a00 - b.a00, a01 - b.a01, a10 - b.a10, a11 - b.a11};
    }
    double max_abs() const;
};

struct ScalarCyclicTriSystem {
    std::vector<double> sub, diag, super, rhs;

    std::size_t size() const noexcept { return diag.size(); }
};

struct CyclicBlockTriSystem {
    std::vector<Mat2> sub, diag, super;
    std::vector<Vec2> rhs;

    explicit CyclicBlockTriSystem(std::size_t M = 0) : sub(M), diag(M), super(M), rhs(M) {}
    std::size_t size() const noexcept { return diag.size(); }
};

/// Dense row-major n x n matrix, used for test oracles and the rare fallback.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit DenseMatrix(std::size_t n_ = 0) : n(n_), a(n_ * n_, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
    std::vector<double> multiply(std::span<const double> x) const;
    double inf_norm() const;
};

struct SolveOptions {
    /// Check ||Ax - b|| against the residual bound after the fast solve.
    bool verify_residual = true;
    /// On a failed fast solve, retry with the dense oracle when the system is small enough.
    bool allow_dense_fallback = true;
};

struct SolveInfo {
    bool used_dense_fallback = false;
    /// ||Ax - b||_inf / (||b||_inf + ||A||_inf ||x||_inf), when verified.
    double relative_residual = 0.0;
};

/// Largest system the dense oracle accepts.
inline constexpr std::size_t kDenseLimit = 4096;
/// Relative residual accepted from a production solve.
inline constexpr double kResidualTolerance = 1e-11;

std::vector<double> solve_scalar_cyclic(const ScalarCyclicTriSystem& system,
                                        const SolveOptions& options = {}, SolveInfo* info = nullptr);

std::vector<Vec2> solve_cyclic_block_tridiagonal(const CyclicBlockTriSystem& system,
                                                 const SolveOptions& options = {},
                                                 SolveInfo* info = nullptr);

/// Gaussian elimination with partial pivoting. n <= kDenseLimit.
std::vector<double> solve_dense_oracle(DenseMatrix matrix, std::vector<double> rhs);

DenseMatrix to_dense(const ScalarCyclicTriSystem& system);
/// 2M x 2M matrix with interleaved (x0, x1) unknowns per node.
DenseMatrix to_dense(const CyclicBlockTriSystem& system);

std::vector<double> multiply(const ScalarCyclicTriSystem& system, std::span<const double> x);
std::vector<Vec2> multiply(const CyclicBlockTriSystem& system, std::span<const Vec2> x);

/// ||Ax - b||_inf / (||b||_inf + ||A||_inf ||x||_inf)
double relative_residual(const ScalarCyclicTriSystem& system, std::span<const double> x);
double relative_residual(const CyclicBlockTriSystem& system, std::span<const Vec2> x);

/// Discrete Fourier transform X_k = sum_j x_j exp(sign * 2 pi i jk / n).
/// Radix-2 when n is a power of two, direct O(n^2) sum otherwise.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, int sign = -1);

/// Solves C x = b for the circulant C with the given first column.
std::vector<double> solve_circulant(std::span<const double> first_column, std::span<const double> rhs);

}  // namespace bbmb
