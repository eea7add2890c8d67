#include "bbmb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bbmb/grid.hpp"

namespace bbmb {
namespace {

constexpr double kPivotTolerance = 1e-14;

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void check_scalar_shape(const ScalarCyclicTriSystem& s) {
    const std::size_t n = s.diag.size();
    if (n < kMinNodes) throw InvalidInput("cyclic solve: need at least 4 rows");
    if (s.sub.size() != n || s.super.size() != n || s.rhs.size() != n)
        throw InvalidInput("cyclic solve: sub/diag/super/rhs lengths differ");
}

void check_block_shape(const CyclicBlockTriSystem& s) {
    const std::size_t n = s.diag.size();
    if (n < kMinNodes) throw InvalidInput("block cyclic solve: need at least 4 block rows");
    if (s.sub.size() != n || s.super.size() != n || s.rhs.size() != n)
        throw InvalidInput("block cyclic solve: sub/diag/super/rhs lengths differ");
}

/// Solves the 4x4 capacitance system in place with partial pivoting.
template <std::size_t K>
void solve_small(std::array<std::array<double, K>, K> a, std::array<double, K>& b) {
    double scale = 0.0;
    for (const auto& row : a)
        for (double x : row) scale = std::max(scale, std::abs(x));
    for (std::size_t c = 0; c < K; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < K; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) <= kPivotTolerance * scale)
            throw SingularSystem("Woodbury capacitance matrix is singular");
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = c + 1; r < K; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < K; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = K; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < K; ++k) s -= a[c][k] * b[k];
        b[c] = s / a[c][c];
    }
}

// Tridiagonal LU with partial pivoting (LAPACK gttrf/gttrs layout) for the
// acyclic core. Handles any nonsingular core, dominant or not.
class PivotedTridiagonal {
public:
    explicit PivotedTridiagonal(const ScalarCyclicTriSystem& s) {
        const std::size_t n = s.size();
        d_ = s.diag;
        dl_.assign(s.sub.begin() + 1, s.sub.end());
        du_.assign(s.super.begin(), s.super.end() - 1);
        du2_.assign(n - 2, 0.0);
        swapped_.assign(n - 1, false);
        const double scale = std::max({max_abs(s.sub), max_abs(s.diag), max_abs(s.super)});

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] != 0.0) {
                    const double f = dl_[i] / d_[i];
                    dl_[i] = f;
                    d_[i + 1] -= f * du_[i];
                }
            } else {
                const double f = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = f;
                const double t = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = t - f * d_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -f * du_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(d_[i]) <= kPivotTolerance * scale)
                throw SingularSystem("cyclic solve: singular pivot at row " + std::to_string(i));
    }

    void solve(std::span<double> b) const {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl_[i] * b[i];
            }
        }
        b[n - 1] /= d_[n - 1];
        b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t i = n - 2; i-- > 0;)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

private:
    std::vector<double> d_, dl_, du_, du2_;
    std::vector<bool> swapped_;
};

std::vector<double> scalar_fast(const ScalarCyclicTriSystem& s) {
    const std::size_t n = s.size();
    const PivotedTridiagonal core(s);

    // A = T + U V^T with U = [e_0 sub_0, e_{n-1} super_{n-1}], V = [e_{n-1}, e_0].
    std::vector<double> y = s.rhs;
    core.solve(y);
    std::vector<double> z0(n, 0.0), z1(n, 0.0);
    z0[0] = s.sub[0];
    z1[n - 1] = s.super[n - 1];
    core.solve(z0);
    core.solve(z1);

    std::array<std::array<double, 2>, 2> cap{{{1.0 + z0[n - 1], z1[n - 1]}, {z0[0], 1.0 + z1[0]}}};
    std::array<double, 2> w{y[n - 1], y[0]};
    solve_small<2>(cap, w);
    for (std::size_t i = 0; i < n; ++i) y[i] -= z0[i] * w[0] + z1[i] * w[1];
    return y;
}

Mat2 inverse(const Mat2& m, double det) {
    const double r = 1.0 / det;
    return {m.a11 * r, -m.a01 * r, -m.a10 * r, m.a00 * r};
}

// Block LU of the acyclic core without inter-block pivoting.
class BlockThomas {
public:
    explicit BlockThomas(const CyclicBlockTriSystem& s) : super_(s.super) {
        const std::size_t n = s.size();
        dinv_.resize(n);
        lower_.resize(n);
        Mat2 d = s.diag[0];
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                lower_[i] = s.sub[i] * dinv_[i - 1];
                d = s.diag[i] - lower_[i] * s.super[i - 1];
            }
            // Row scales of block row i, over all three blocks.
            const double r0 = std::max({std::abs(s.sub[i].a00), std::abs(s.sub[i].a01),
                                        std::abs(s.diag[i].a00), std::abs(s.diag[i].a01),
                                        std::abs(s.super[i].a00), std::abs(s.super[i].a01)});
            const double r1 = std::max({std::abs(s.sub[i].a10), std::abs(s.sub[i].a11),
                                        std::abs(s.diag[i].a10), std::abs(s.diag[i].a11),
                                        std::abs(s.super[i].a10), std::abs(s.super[i].a11)});
            const double det = d.det();
            if (!(std::abs(det) > kPivotTolerance * r0 * r1))
                throw SingularSystem("block cyclic solve: singular 2x2 pivot at block " +
                                     std::to_string(i));
            dinv_[i] = inverse(d, det);
        }
    }

    void solve(std::span<Vec2> b) const {
        const std::size_t n = b.size();
        for (std::size_t i = 1; i < n; ++i) {
            const Vec2 l = lower_[i] * b[i - 1];
            b[i][0] -= l[0];
            b[i][1] -= l[1];
        }
        b[n - 1] = dinv_[n - 1] * b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            const Vec2 u = super_[i] * b[i + 1];
            b[i] = dinv_[i] * Vec2{b[i][0] - u[0], b[i][1] - u[1]};
        }
    }

private:
    std::vector<Mat2> super_;
    std::vector<Mat2> dinv_;
    std::vector<Mat2> lower_;
};

std::vector<Vec2> block_fast(const CyclicBlockTriSystem& s) {
    const std::size_t n = s.size();
    const BlockThomas core(s);

    std::vector<Vec2> y = s.rhs;
    core.solve(y);

    // A = T + U V^T, U = [E_0 sub_0, E_{n-1} super_{n-1}] (2n x 4), V = [E_{n-1}, E_0].
    const Mat2& c0 = s.sub[0];
    const Mat2& c1 = s.super[n - 1];
    std::array<std::vector<Vec2>, 4> z;
    for (auto& col : z) col.assign(n, Vec2{0.0, 0.0});
    z[0][0] = {c0.a00, c0.a10};
    z[1][0] = {c0.a01, c0.a11};
    z[2][n - 1] = {c1.a00, c1.a10};
    z[3][n - 1] = {c1.a01, c1.a11};
    for (auto& col : z) core.solve(col);

    // Capacitance I + V^T Z; V^T picks block n-1 then block 0.
    std::array<std::array<double, 4>, 4> cap{};
    for (std::size_t c = 0; c < 4; ++c) {
        cap[0][c] = z[c][n - 1][0];
        cap[1][c] = z[c][n - 1][1];
        cap[2][c] = z[c][0][0];
        cap[3][c] = z[c][0][1];
        cap[c][c] += 1.0;
    }
    std::array<double, 4> w{y[n - 1][0], y[n - 1][1], y[0][0], y[0][1]};
    solve_small<4>(cap, w);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < 2; ++r)
            y[i][r] -= z[0][i][r] * w[0] + z[1][i][r] * w[1] + z[2][i][r] * w[2] + z[3][i][r] * w[3];
    return y;
}

template <typename System, typename X, typename Fast, typename Flatten, typename Unflatten>
std::vector<X> solve_checked(const System& s, const SolveOptions& options, SolveInfo* info,
                             std::size_t unknowns, Fast&& fast, Flatten&& flatten_rhs,
                             Unflatten&& unflatten) {
    SolveInfo local;
    std::vector<X> x;
    bool ok = false;
    try {
        x = fast(s);
        ok = true;
        if (options.verify_residual) {
            local.relative_residual = relative_residual(s, x);
            ok = local.relative_residual <= kResidualTolerance;
        }
    } catch (const SingularSystem&) {
        if (!options.allow_dense_fallback || unknowns > kDenseLimit) throw;
    }
    if (!ok) {
        if (!options.allow_dense_fallback || unknowns > kDenseLimit)
            throw SingularSystem("cyclic solve: residual check failed");
        x = unflatten(solve_dense_oracle(to_dense(s), flatten_rhs(s)));
        local.used_dense_fallback = true;
        local.relative_residual = relative_residual(s, x);
    }
    if (info) *info = local;
    return x;
}

}  // namespace

double Mat2::max_abs() const {
    return std::max({std::abs(a00), std::abs(a01), std::abs(a10), std::abs(a11)});
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += a[r * n + c] * x[c];
        y[r] = s;
    }
    return y;
}

double DenseMatrix::inf_norm() const {
    double m = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += std::abs(a[r * n + c]);
        m = std::max(m, s);
    }
    return m;
}

std::vector<double> solve_scalar_cyclic(const ScalarCyclicTriSystem& system,
                                        const SolveOptions& options, SolveInfo* info) {
    check_scalar_shape(system);
    return solve_checked<ScalarCyclicTriSystem, double>(
        system, options, info, system.size(), scalar_fast,
        [](const ScalarCyclicTriSystem& s) { return s.rhs; },
        [](std::vector<double> v) { return v; });
}

std::vector<Vec2> solve_cyclic_block_tridiagonal(const CyclicBlockTriSystem& system,
                                                 const SolveOptions& options, SolveInfo* info) {
    check_block_shape(system);
    return solve_checked<CyclicBlockTriSystem, Vec2>(
        system, options, info, 2 * system.size(), block_fast,
        [](const CyclicBlockTriSystem& s) {
            std::vector<double> b(2 * s.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                b[2 * i] = s.rhs[i][0];
                b[2 * i + 1] = s.rhs[i][1];
            }
            return b;
        },
        [](const std::vector<double>& v) {
            std::vector<Vec2> x(v.size() / 2);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = {v[2 * i], v[2 * i + 1]};
            return x;
        });
}

std::vector<double> solve_dense_oracle(DenseMatrix m, std::vector<double> b) {
    const std::size_t n = m.n;
    if (n == 0 || b.size() != n) throw InvalidInput("dense solve: dimension mismatch");
    if (n > kDenseLimit) throw InvalidInput("dense solve: system larger than 4096 unknowns");
    double scale = 0.0;
    for (double x : m.a) scale = std::max(scale, std::abs(x));

    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
        if (!(std::abs(m(p, c)) > kPivotTolerance * scale))
            throw SingularSystem("dense solve: matrix is singular");
        if (p != c) {
            std::swap_ranges(m.a.begin() + static_cast<std::ptrdiff_t>(p * n),
                             m.a.begin() + static_cast<std::ptrdiff_t>((p + 1) * n),
                             m.a.begin() + static_cast<std::ptrdiff_t>(c * n));
            std::swap(b[p], b[c]);
        }
        const double piv = m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / piv;
            if (f == 0.0) continue;
            for (std::size_t k = c + 1; k < n; ++k) m(r, k) -= f * m(c, k);
            m(r, c) = 0.0;
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= m(c, k) * b[k];
        b[c] = s / m(c, c);
    }
    return b;
}

DenseMatrix to_dense(const ScalarCyclicTriSystem& s) {
    const std::size_t n = s.size();
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, (i + n - 1) % n) += s.sub[i];
        m(i, i) += s.diag[i];
        m(i, (i + 1) % n) += s.super[i];
    }
    return m;
}

DenseMatrix to_dense(const CyclicBlockTriSystem& s) {
    const std::size_t n = s.size();
    DenseMatrix m(2 * n);
    auto put = [&](std::size_t bi, std::size_t bj, const Mat2& b) {
        m(2 * bi, 2 * bj) += b.a00;
        m(2 * bi, 2 * bj + 1) += b.a01;
        m(2 * bi + 1, 2 * bj) += b.a10;
        m(2 * bi + 1, 2 * bj + 1) += b.a11;
    };
    for (std::size_t i = 0; i < n; ++i) {
        put(i, (i + n - 1) % n, s.sub[i]);
        put(i, i, s.diag[i]);
        put(i, (i + 1) % n, s.super[i]);
    }
    return m;
}

std::vector<double> multiply(const ScalarCyclicTriSystem& s, std::span<const double> x) {
    const std::size_t n = s.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = s.sub[i] * x[(i + n - 1) % n] + s.diag[i] * x[i] + s.super[i] * x[(i + 1) % n];
    return y;
}

std::vector<Vec2> multiply(const CyclicBlockTriSystem& s, std::span<const Vec2> x) {
    const std::size_t n = s.size();
    std::vector<Vec2> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = s.sub[i] * x[(i + n - 1) % n];
        const Vec2 b = s.diag[i] * x[i];
        const Vec2 c = s.super[i] * x[(i + 1) % n];
        y[i] = {a[0] + b[0] + c[0], a[1] + b[1] + c[1]};
    }
    return y;
}

double relative_residual(const ScalarCyclicTriSystem& s, std::span<const double> x) {
    const std::vector<double> ax = multiply(s, x);
    double res = 0.0, a_norm = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        res = std::max(res, std::abs(ax[i] - s.rhs[i]));
        a_norm = std::max(a_norm, std::abs(s.sub[i]) + std::abs(s.diag[i]) + std::abs(s.super[i]));
    }
    const double denom = max_abs(s.rhs) + a_norm * max_abs(x);
    return denom > 0.0 ? res / denom : res;
}

double relative_residual(const CyclicBlockTriSystem& s, std::span<const Vec2> x) {
    const std::vector<Vec2> ax = multiply(s, x);
    double res = 0.0, a_norm = 0.0, b_norm = 0.0, x_norm = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t r = 0; r < 2; ++r) {
            res = std::max(res, std::abs(ax[i][r] - s.rhs[i][r]));
            b_norm = std::max(b_norm, std::abs(s.rhs[i][r]));
            x_norm = std::max(x_norm, std::abs(x[i][r]));
        }
        const Mat2 &l = s.sub[i], &d = s.diag[i], &u = s.super[i];
        a_norm = std::max({a_norm,
                           std::abs(l.a00) + std::abs(l.a01) + std::abs(d.a00) + std::abs(d.a01) +
                               std::abs(u.a00) + std::abs(u.a01),
                           std::abs(l.a10) + std::abs(l.a11) + std::abs(d.a10) + std::abs(d.a11) +
                               std::abs(u.a10) + std::abs(u.a11)});
    }
    const double denom = b_norm + a_norm * x_norm;
    return denom > 0.0 ? res / denom : res;
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, int sign) {
    using cd = std::complex<double>;
    const std::size_t n = x.size();
    const double dir = sign < 0 ? -1.0 : 1.0;
    if (n == 0) return {};
    // Twiddles indexed exactly by (jk mod n) to avoid phase drift.
    std::vector<cd> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = dir * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(a), std::sin(a)};
    }

    if ((n & (n - 1)) == 0) {
        std::vector<cd> a(x.begin(), x.end());
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t stride = n / len;
            for (std::size_t i = 0; i < n; i += len)
                for (std::size_t k = 0; k < len / 2; ++k) {
                    const cd u = a[i + k];
                    const cd v = a[i + k + len / 2] * w[k * stride];
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                }
        }
        return a;
    }

    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += x[j] * w[(j * k) % n];
        out[k] = s;
    }
    return out;
}

std::vector<double> solve_circulant(std::span<const double> first_column, std::span<const double> rhs) {
    const std::size_t n = first_column.size();
    if (n == 0 || rhs.size() != n) throw InvalidInput("circulant solve: dimension mismatch");
    using cd = std::complex<double>;
    std::vector<cd> c(first_column.begin(), first_column.end());
    std::vector<cd> b(rhs.begin(), rhs.end());
    const auto lambda = dft(c, -1);
    auto bh = dft(b, -1);
    double lmax = 0.0;
    for (const cd& l : lambda) lmax = std::max(lmax, std::abs(l));
    for (std::size_t k = 0; k < n; ++k) {
        if (!(std::abs(lambda[k]) > kPivotTolerance * lmax))
            throw SingularSystem("circulant solve: zero eigenvalue");
        bh[k] /= lambda[k];
    }
    const auto x = dft(bh, +1);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = x[j].real() / static_cast<double>(n);
    return out;
}

}  // namespace bbmb
