#include <benchmark/benchmark.h>

#include <random>

#include "qdarwin/axy.hpp"
#include "qdarwin/experiments.hpp"
#include "qdarwin/metrics.hpp"

using namespace qdarwin;

namespace {

DensityOperator random_density(int dim, std::vector<int> dims = {}) {
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::from_matrix(rho, std::move(dims));
}

void bm_entropy(benchmark::State& state) {
  auto rho = random_density(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(von_neumann_entropy(rho));
}

void bm_partial_trace(benchmark::State& state) {
  auto rho = random_density(32, {2, 2, 2, 2, 2});
  std::vector<int> keep{0, 2};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, keep));
}

void bm_fragment_average(benchmark::State& state) {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  auto evolved = evolve_branches(initial_branched_state(bath), bath, 14.5e-6);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fragment_average_chi(evolved, m));
}

void bm_info_breakdown(benchmark::State& state) {
  auto bath = BathConfig::four_spin_register();
  auto evolved = evolve_branches(initial_branched_state(bath), bath, 14.5e-6);
  Fragment fragment{{0, 1, 2, 3}};
  for (auto _ : state) benchmark::DoNotOptimize(info_breakdown(evolved, fragment));
}

void bm_solve_timings(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_timings(0.2, 1e-6));
}

void bm_evolve_lindblad(benchmark::State& state) {
  auto bath = BathConfig::four_spin_register();
  bath.spins.resize(2);
  auto rho = to_density_operator(initial_branched_state(bath));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_lindblad(rho, bath, 2e-6));
}

void bm_chernoff(benchmark::State& state) {
  auto rho0 = random_density(2);
  auto rho1 = random_density(2);
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_information(rho0, rho1));
}

void bm_loschmidt_echo(benchmark::State& state) {
  auto bath = BathConfig::four_spin_register();
  std::vector<double> taus;
  for (int i = 0; i < 512; ++i) taus.push_back(i * 0.1e-6);
  for (auto _ : state) benchmark::DoNotOptimize(loschmidt_echo(bath, 3, taus));
}

}  // namespace

BENCHMARK(bm_entropy)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(bm_partial_trace);
BENCHMARK(bm_fragment_average)->Arg(1)->Arg(2)->Arg(4);
BENCHMARK(bm_info_breakdown);
BENCHMARK(bm_solve_timings);
BENCHMARK(bm_evolve_lindblad);
BENCHMARK(bm_chernoff);
BENCHMARK(bm_loschmidt_echo);

BENCHMARK_MAIN();
