// Serial vs OpenMP grid kernels, and O(M) scaling of the cyclic solvers.
//
//   ./bbmb_bench --benchmark_filter=psi

#include <benchmark/benchmark.h>

#include <random>

#include "bbmb/kernels.hpp"
#include "bbmb/linalg.hpp"
#include "bbmb/problems.hpp"
#include "bbmb/scheme.hpp"

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

template <void (*Kernel)(std::span<const double>, double, std::span<double>)>
void BM_Stencil(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = random_values(n, 1);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(u, 1e-3, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Kernel)(std::span<const double>, std::span<const double>, double, std::span<double>)>
void BM_Psi(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_values(n, 1), b = random_values(n, 2);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(a, b, 1e-3, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(std::span<const double>, std::span<const double>)>
void BM_Reduce(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_values(n, 1), b = random_values(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScalarCyclic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const bbmb::ScalarCyclicTriSystem s{std::vector<double>(n, 1.0 / 12), std::vector<double>(n, 5.0 / 6),
                                        std::vector<double>(n, 1.0 / 12), random_values(n, 3)};
    for (auto _ : state) benchmark::DoNotOptimize(bbmb::solve_scalar_cyclic(s));
    state.SetComplexityN(state.range(0));
}

void BM_BlockCyclicStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const bbmb::Problem p = bbmb::soliton_problem();
    const bbmb::Grid1D g(p.x_left, p.x_right, n, 1.0, 100);
    bbmb::StepperState s = bbmb::advance(bbmb::init_state(p.initial, g, p.params), g, p.params);
    const auto sys = bbmb::assemble_interior_step(s, g, p.params);
    for (auto _ : state) benchmark::DoNotOptimize(bbmb::solve_cyclic_block_tridiagonal(sys));
    state.SetComplexityN(state.range(0));
}

namespace k = bbmb::kernels;

BENCHMARK(BM_Stencil<k::serial::second_diff>)->Name("second_diff/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Stencil<k::omp::second_diff>)->Name("second_diff/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21)->UseRealTime();
BENCHMARK(BM_Psi<k::serial::psi>)->Name("psi/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Psi<k::omp::psi>)->Name("psi/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21)->UseRealTime();
BENCHMARK(BM_Reduce<k::serial::dot>)->Name("dot/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Reduce<k::omp::dot>)->Name("dot/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21)->UseRealTime();
BENCHMARK(BM_Reduce<k::serial::diff_dot>)->Name("diff_dot/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Reduce<k::omp::diff_dot>)->Name("diff_dot/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21)->UseRealTime();
BENCHMARK(BM_ScalarCyclic)->RangeMultiplier(2)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oN);
BENCHMARK(BM_BlockCyclicStep)->RangeMultiplier(2)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
