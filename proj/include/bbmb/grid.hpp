/// @file grid.hpp
/// @brief Uniform periodic space-time grid and the periodic grid-function carrier.
///
/// Storage is 0-based: node j holds the value at x_left + j*h, j = 0..M-1.
/// Neighbour access wraps modulo M; there are no ghost cells.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbmb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: length mismatches, degenerate grids, bad parameters.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A pivot or capacitance matrix fell below the singularity threshold.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared in a time step.
class Divergence : public Error {
public:
    Divergence(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Smallest admissible node count; three-point stencils must not self-overlap.
inline constexpr std::size_t kMinNodes = 4;

class Grid1D {
public:
    /// Periodic interval [x_left, x_right) with M nodes, marched to T in N steps.
    Grid1D(double x_left, double x_right, std::size_t M, double T, std::size_t N);

    double x_left() const noexcept { return x_left_; }
    double length() const noexcept { return L_; }
    std::size_t nodes() const noexcept { return M_; }
    double h() const noexcept { return h_; }
    double final_time() const noexcept { return T_; }
    std::size_t steps() const noexcept { return N_; }
    double tau() const noexcept { return tau_; }

    double x(std::size_t j) const noexcept { return x_left_ + static_cast<double>(j) * h_; }
    double t(std::size_t k) const noexcept { return static_cast<double>(k) * tau_; }

    /// Same grid with a different node count (used for h-refinement chains).
    Grid1D with_nodes(std::size_t M) const { return Grid1D(x_left_, x_left_ + L_, M, T_, N_); }
    /// Same grid with a different step count (used for tau-refinement chains).
    Grid1D with_steps(std::size_t N) const { return Grid1D(x_left_, x_left_ + L_, M_, T_, N); }

private:
    double x_left_;
    double L_;
    std::size_t M_;
    double h_;
    double T_;
    std::size_t N_;
    double tau_;
};

/// Length-M real sequence with periodic index semantics u_{j+M} = u_j.
class PeriodicField {
public:
    PeriodicField() = default;
    explicit PeriodicField(std::size_t M, double fill = 0.0) : values_(M, fill) {}
    explicit PeriodicField(std::vector<double> values) : values_(std::move(values)) {}
    PeriodicField(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t j) noexcept { return values_[j]; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }

    /// Value at any integer index, wrapped into 0..M-1.
    double wrapped(std::ptrdiff_t j) const noexcept {
        const auto m = static_cast<std::ptrdiff_t>(values_.size());
        const std::ptrdiff_t r = j % m;
        return values_[static_cast<std::size_t>(r < 0 ? r + m : r)];
    }

    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool all_finite() const noexcept;

    /// Circular shift: result[j] = this[j + shift].
    PeriodicField rotated(std::ptrdiff_t shift) const;

    friend bool operator==(const PeriodicField&, const PeriodicField&) = default;

private:
    std::vector<double> values_;
};

/// Samples f at every node of the grid.
template <typename F>
PeriodicField sample(const Grid1D& grid, F&& f) {
    PeriodicField out(grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) out[j] = f(grid.x(j));
    return out;
}

/// a + s*b, elementwise.
PeriodicField axpy(const PeriodicField& a, double s, const PeriodicField& b);
/// Elementwise average of two fields.
PeriodicField average(const PeriodicField& a, const PeriodicField& b);

}  // namespace bbmb
