/** \file bench_main.cpp
 *  \brief Micro-benchmarks for the hot paths: series evaluation, matrix
 *         assembly + diagonalization, and the full fluctuation report.
 */
#include <benchmark/benchmark.h>

#include <limits>

#include "confinium/eigensolve.hpp"
#include "confinium/grid.hpp"
#include "confinium/model.hpp"
#include "confinium/observables.hpp"
#include "confinium/specfun.hpp"

namespace es = confinium::eigensolve;
namespace m = confinium::model;
namespace ob = confinium::observables;

namespace {

void BM_kummer(benchmark::State& state) {
    double z = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(confinium::specfun::kummer_m(0.25, 1.5, z));
        z = z < 20.0 ? z + 0.1 : 0.1;
    }
}
BENCHMARK(BM_kummer);

void BM_assemble(benchmark::State& state) {
    const auto sys = m::SystemSpec::cha(5.0, 0);
    const m::TruncationPolicy policy;
    const auto dom = m::solve_domain(sys, policy);
    const auto grid = confinium::grid::build_grid(dom, policy.grid_n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(es::assemble_hamiltonian(sys, grid));
    }
}
BENCHMARK(BM_assemble);

void BM_solve_ground_state(benchmark::State& state) {
    const auto sys = m::SystemSpec::cha(1.0, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(es::solve_bound_states(sys, 1));
    }
}
BENCHMARK(BM_solve_ground_state)->Unit(benchmark::kMillisecond);

void BM_virial_report(benchmark::State& state) {
    const auto solved = es::solve_bound_states(m::SystemSpec::cha(1.0, 0), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ob::virial_report(solved[0]));
    }
}
BENCHMARK(BM_virial_report)->Unit(benchmark::kMillisecond);

void BM_shooting_root(benchmark::State& state) {
    const auto sys = m::SystemSpec::cha(1.0, 0);
    const auto st = m::make_state(sys, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(es::shoot_energy(sys, st, 2.3, 2.45));
    }
}
BENCHMARK(BM_shooting_root);

}  // namespace

BENCHMARK_MAIN();
