#include "bbmb/problems.hpp"

#include <cmath>
#include <numbers>

namespace bbmb {
namespace {

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

}  // namespace

Problem manufactured_problem(double mu, double gamma, double kappa, double nu) {
    using std::numbers::pi;
    Problem p;
    p.name = "example1";
    p.x_left = 0.0;
    p.x_right = 2.0;
    p.params = SchemeParams{mu, gamma, kappa, nu, {}, std::nullopt};
    // f = u_t - mu u_xxt + gamma u u_x + kappa u_x - nu u_xx for u = e^t sin(pi x)
    p.params.source = [=](double x, double t) {
        const double et = std::exp(t);
        return (1.0 + (mu + nu) * pi * pi) * et * std::sin(pi * x) +
               0.5 * gamma * pi * et * et * std::sin(2.0 * pi * x) + kappa * pi * et * std::cos(pi * x);
    };
    p.initial = [](double x) { return std::sin(pi * x); };
    p.exact = ExactSolution{
        [](double x, double t) { return std::exp(t) * std::sin(pi * x); },
        [](double x, double t) { return -pi * pi * std::exp(t) * std::sin(pi * x); },
    };
    return p;
}

Problem soliton_problem(double mu, double nu) {
    Problem p;
    p.name = "example2";
    p.x_left = -25.0;
    p.x_right = 25.0;
    p.params = SchemeParams{mu, 1.0, 1.0, nu, {}, std::nullopt};
    p.initial = [](double x) { return 0.5 * sech2(x / 4.0); };
    return p;
}

Problem double_well_problem() {
    Problem p;
    p.name = "example3";
    p.x_left = -50.0;
    p.x_right = 50.0;
    p.params = SchemeParams{1.0, 1.0, 1.0, 1.0, {}, std::nullopt};
    p.params.reaction = Reaction{
        [](double u) { return u * u * u - u; },
        [](double u) { return 3.0 * u * u - 1.0; },
    };
    p.initial = [](double x) { return std::sqrt(6.0) / 3.0 * sech2(x / 3.0); };
    return p;
}

}  // namespace bbmb
