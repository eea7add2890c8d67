#include "bbmb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bbmb::kernels {
namespace {

// Index helpers for the two wrap-around nodes; interior loops avoid the modulo.
template <typename Body>
void for_each_node(std::size_t n, Body&& body) {
    body(0, n - 1, 1);
    for (std::size_t j = 1; j + 1 < n; ++j) body(j, j - 1, j + 1);
    body(n - 1, n - 2, 0);
}

template <typename Body>
void for_each_node_parallel(std::size_t n, Body&& body) {
    body(0, n - 1, 1);
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t j = 1; j < last; ++j) {
        const auto i = static_cast<std::size_t>(j);
        body(i, i - 1, i + 1);
    }
    body(n - 1, n - 2, 0);
}

template <typename Term>
double chunk_sum(std::size_t begin, std::size_t end, Term&& term) {
    CompensatedSum s;
    for (std::size_t j = begin; j < end; ++j) s.add(term(j));
    return s.value();
}

template <typename Term>
double reduce_serial(std::size_t n, Term&& term) {
    CompensatedSum total;
    for (std::size_t b = 0; b < n; b += kReduceChunk)
        total.add(chunk_sum(b, std::min(n, b + kReduceChunk), term));
    return total.value();
}

template <typename Term>
double reduce_parallel(std::size_t n, Term&& term) {
    const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(chunks);
    const auto nchunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
        const auto b = static_cast<std::size_t>(c) * kReduceChunk;
        partial[static_cast<std::size_t>(c)] = chunk_sum(b, std::min(n, b + kReduceChunk), term);
    }
    CompensatedSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

}  // namespace

namespace serial {

void second_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 1.0 / (h * h);
    for_each_node(u.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = ((u[jp] - u[j]) - (u[j] - u[jm])) * s;
    });
}

void central_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 0.5 / h;
    for_each_node(u.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = (u[jp] - u[jm]) * s;
    });
}

void backward_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 1.0 / h;
    for_each_node(u.size(), [&](std::size_t j, std::size_t jm, std::size_t) {
        out[j] = (u[j] - u[jm]) * s;
    });
}

void psi(std::span<const double> a, std::span<const double> b, double h, std::span<double> out) {
    const double s = 1.0 / (6.0 * h);
    for_each_node(a.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = (a[j] * (b[jp] - b[jm]) + a[jp] * b[jp] - a[jm] * b[jm]) * s;
    });
}

double dot(std::span<const double> a, std::span<const double> b) {
    return reduce_serial(a.size(), [&](std::size_t j) { return a[j] * b[j]; });
}

double diff_dot(std::span<const double> u, std::span<const double> w) {
    const std::size_t n = u.size();
    return reduce_serial(n, [&](std::size_t j) {
        const std::size_t jm = j == 0 ? n - 1 : j - 1;
        return (u[j] - u[jm]) * (w[j] - w[jm]);
    });
}

double max_abs(std::span<const double> u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace serial

namespace omp {

void second_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 1.0 / (h * h);
    for_each_node_parallel(u.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = ((u[jp] - u[j]) - (u[j] - u[jm])) * s;
    });
}

void central_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 0.5 / h;
    for_each_node_parallel(u.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = (u[jp] - u[jm]) * s;
    });
}

void backward_diff(std::span<const double> u, double h, std::span<double> out) {
    const double s = 1.0 / h;
    for_each_node_parallel(u.size(), [&](std::size_t j, std::size_t jm, std::size_t) {
        out[j] = (u[j] - u[jm]) * s;
    });
}

void psi(std::span<const double> a, std::span<const double> b, double h, std::span<double> out) {
    const double s = 1.0 / (6.0 * h);
    for_each_node_parallel(a.size(), [&](std::size_t j, std::size_t jm, std::size_t jp) {
        out[j] = (a[j] * (b[jp] - b[jm]) + a[jp] * b[jp] - a[jm] * b[jm]) * s;
    });
}

double dot(std::span<const double> a, std::span<const double> b) {
    return reduce_parallel(a.size(), [&](std::size_t j) { return a[j] * b[j]; });
}

double diff_dot(std::span<const double> u, std::span<const double> w) {
    const std::size_t n = u.size();
    return reduce_parallel(n, [&](std::size_t j) {
        const std::size_t jm = j == 0 ? n - 1 : j - 1;
        return (u[j] - u[jm]) * (w[j] - w[jm]);
    });
}

double max_abs(std::span<const double> u) {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for reduction(max : m) schedule(static) if (u.size() >= kParallelThreshold)
    for (std::ptrdiff_t j = 0; j < n; ++j) m = std::max(m, std::abs(u[static_cast<std::size_t>(j)]));
    return m;
}

}  // namespace omp

}  // namespace bbmb::kernels
