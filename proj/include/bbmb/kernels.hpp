/// @file kernels.hpp
/// @brief Raw periodic stencil and reduction loops.
///
/// Two implementations with identical arithmetic: `serial` is the reference
/// kept for testing, `omp` splits the node loop across OpenMP threads once the
/// field is long enough to pay for it. Pointwise kernels are bitwise identical
/// between the two. Reductions accumulate fixed-size chunks with Neumaier
/// compensation and combine the chunk partials in index order, so the result
/// does not depend on the thread count either.
///
/// All kernels assume in.size() == out.size() >= 3; the checked entry points
/// live in grid_ops.hpp.

#pragma once

#include <cstddef>
#include <span>

namespace bbmb::kernels {

/// Chunk length for compensated reductions.
inline constexpr std::size_t kReduceChunk = 4096;
/// Below this many nodes the omp kernels run single-threaded.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace serial {

/// out_j = (u_{j+1} - 2u_j + u_{j-1}) / h^2
void second_diff(std::span<const double> u, double h, std::span<double> out);
/// out_j = (u_{j+1} - u_{j-1}) / (2h)
void central_diff(std::span<const double> u, double h, std::span<double> out);
/// out_j = (u_j - u_{j-1}) / h
void backward_diff(std::span<const double> u, double h, std::span<double> out);
/// out_j = [a_j (b_{j+1} - b_{j-1}) + a_{j+1} b_{j+1} - a_{j-1} b_{j-1}] / (6h)
void psi(std::span<const double> a, std::span<const double> b, double h, std::span<double> out);
/// Sum of a_j * b_j.
double dot(std::span<const double> a, std::span<const double> b);
/// Sum of (u_j - u_{j-1})(w_j - w_{j-1}).
double diff_dot(std::span<const double> u, std::span<const double> w);
double max_abs(std::span<const double> u);

}  // namespace serial

namespace omp {

void second_diff(std::span<const double> u, double h, std::span<double> out);
void central_diff(std::span<const double> u, double h, std::span<double> out);
void backward_diff(std::span<const double> u, double h, std::span<double> out);
void psi(std::span<const double> a, std::span<const double> b, double h, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double diff_dot(std::span<const double> u, std::span<const double> w);
double max_abs(std::span<const double> u);

}  // namespace omp

}  // namespace bbmb::kernels
