#include "bbmb/grid.hpp"

#include <cmath>
#include <string>

namespace bbmb {

Grid1D::Grid1D(double x_left, double x_right, std::size_t M, double T, std::size_t N)
    : x_left_(x_left), L_(x_right - x_left), M_(M), h_(0.0), T_(T), N_(N), tau_(0.0) {
    if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(L_ > 0.0))
        throw InvalidInput("grid: domain must satisfy x_left < x_right");
    if (M < kMinNodes)
        throw InvalidInput("grid: M must be at least 4, got " + std::to_string(M));
    if (N < 2) throw InvalidInput("grid: N must be at least 2, got " + std::to_string(N));
    if (!std::isfinite(T) || !(T > 0.0)) throw InvalidInput("grid: T must be positive");
    h_ = L_ / static_cast<double>(M);
    tau_ = T / static_cast<double>(N);
}

bool PeriodicField::all_finite() const noexcept {
    for (double x : values_)
        if (!std::isfinite(x)) return false;
    return true;
}

PeriodicField PeriodicField::rotated(std::ptrdiff_t shift) const {
    PeriodicField out(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        out[j] = wrapped(static_cast<std::ptrdiff_t>(j) + shift);
    return out;
}

PeriodicField axpy(const PeriodicField& a, double s, const PeriodicField& b) {
    if (a.size() != b.size()) throw InvalidInput("axpy: length mismatch");
    PeriodicField out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + s * b[j];
    return out;
}

PeriodicField average(const PeriodicField& a, const PeriodicField& b) {
    if (a.size() != b.size()) throw InvalidInput("average: length mismatch");
    PeriodicField out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = 0.5 * (a[j] + b[j]);
    return out;
}

}  // namespace bbmb
