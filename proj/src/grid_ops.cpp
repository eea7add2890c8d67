#include "bbmb/grid_ops.hpp"

#include <cmath>

#include "bbmb/kernels.hpp"

namespace bbmb {
namespace {

void check_field(const PeriodicField& u, const char* op) {
    if (u.size() < kMinNodes)
        throw InvalidInput(std::string(op) + ": field needs at least 4 nodes");
}

void check_step(double h, const char* op) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput(std::string(op) + ": h must be positive");
}

void check_pair(const PeriodicField& a, const PeriodicField& b, const char* op) {
    check_field(a, op);
    if (a.size() != b.size()) throw InvalidInput(std::string(op) + ": length mismatch");
}

}  // namespace

PeriodicField delta2x(const PeriodicField& u, double h) {
    check_field(u, "delta2x");
    check_step(h, "delta2x");
    PeriodicField out(u.size());
    kernels::omp::second_diff(u.span(), h, out.span());
    return out;
}

PeriodicField central_dx(const PeriodicField& u, double h) {
    check_field(u, "central_dx");
    check_step(h, "central_dx");
    PeriodicField out(u.size());
    kernels::omp::central_diff(u.span(), h, out.span());
    return out;
}

PeriodicField delta_x_half(const PeriodicField& u, double h) {
    check_field(u, "delta_x_half");
    check_step(h, "delta_x_half");
    PeriodicField out(u.size());
    kernels::omp::backward_diff(u.span(), h, out.span());
    return out;
}

PeriodicField psi(const PeriodicField& a, const PeriodicField& b, double h) {
    check_pair(a, b, "psi");
    check_step(h, "psi");
    PeriodicField out(a.size());
    kernels::omp::psi(a.span(), b.span(), h, out.span());
    return out;
}

double inner_product(const PeriodicField& u, const PeriodicField& w, double h) {
    check_pair(u, w, "inner_product");
    check_step(h, "inner_product");
    return h * kernels::omp::dot(u.span(), w.span());
}

double h1_inner_product(const PeriodicField& u, const PeriodicField& w, double h) {
    check_pair(u, w, "h1_inner_product");
    check_step(h, "h1_inner_product");
    return kernels::omp::diff_dot(u.span(), w.span()) / h;
}

double l2_norm_squared(const PeriodicField& u, double h) { return inner_product(u, u, h); }

double h1_semi_squared(const PeriodicField& u, double h) { return h1_inner_product(u, u, h); }

double max_norm(const PeriodicField& u) { return kernels::omp::max_abs(u.span()); }

DiscreteNorms discrete_norms(const PeriodicField& u, double h) {
    return {std::sqrt(l2_norm_squared(u, h)), std::sqrt(h1_semi_squared(u, h)), max_norm(u)};
}

}  // namespace bbmb
