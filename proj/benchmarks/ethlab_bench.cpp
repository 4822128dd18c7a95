#include <benchmark/benchmark.h>

#include "ethlab/basis.hpp"
#include "ethlab/dynamics.hpp"
#include "ethlab/entanglement.hpp"
#include "ethlab/eth.hpp"
#include "ethlab/hamiltonian.hpp"
#include "ethlab/rmt.hpp"
#include "ethlab/spectral.hpp"

using namespace ethlab;

namespace {

HcbParams chaotic(int L, int N) {
  HcbParams p;
  p.sites = L;
  p.particles = N;
  p.t_prime = 0.96;
  p.V_prime = 0.96;
  return p;
}

// filling near 0.35: L = 11, 14, 17 with N = 4, 5, 6
int particles_for(int L) { return L == 11 ? 4 : L == 14 ? 5 : 6; }

void BM_SectorBuild(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_momentum_sector(L, particles_for(L), 1));
  }
}
BENCHMARK(BM_SectorBuild)->Arg(11)->Arg(14)->Arg(17)->Unit(benchmark::kMicrosecond);

void BM_HamiltonianBuild(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto s = build_momentum_sector(L, particles_for(L), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_hcb_hamiltonian(chaotic(L, particles_for(L)), s));
  state.counters["dim"] = static_cast<double>(s.dim());
}
BENCHMARK(BM_HamiltonianBuild)->Arg(11)->Arg(14)->Arg(17)->Unit(benchmark::kMicrosecond);

void BM_Diagonalize(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto s = build_momentum_sector(L, particles_for(L), 1);
  const auto h = build_hcb_hamiltonian(chaotic(L, particles_for(L)), s);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h));
  state.counters["dim"] = static_cast<double>(s.dim());
}
BENCHMARK(BM_Diagonalize)->Arg(11)->Arg(14)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_DiagonalFluctuations(benchmark::State& state) {
  const auto s = build_momentum_sector(17, 6, 1);
  const auto es = diagonalize(build_hcb_hamiltonian(chaotic(17, 6), s));
  const auto o = build_observable(observable::DensityProduct{0, 1}, s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonal_fluctuations(eigenstate_expectations(es, o), {}));
  }
}
BENCHMARK(BM_DiagonalFluctuations)->Unit(benchmark::kMillisecond);

void BM_HalfCutEntropy(benchmark::State& state) {
  const auto s = build_momentum_sector(14, 5, 1);
  const auto es = diagonalize(build_hcb_hamiltonian(chaotic(14, 5), s));
  const auto full = lift_to_full_basis(es.vectors.col(static_cast<Eigen::Index>(s.dim() / 2)), s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(von_neumann_entropy(reduced_density_matrix(full, {7, 0})));
  }
}
BENCHMARK(BM_HalfCutEntropy)->Unit(benchmark::kMillisecond);

void BM_QuenchTrace(benchmark::State& state) {
  const auto s = build_momentum_sector(14, 5, 0);
  const auto es = diagonalize(build_hcb_hamiltonian(chaotic(14, 5), s));
  const auto o = build_observable(observable::DensityProduct{0, 1}, s);
  const CMatrix oe = to_eigenbasis(es, o);
  HcbParams pre = chaotic(14, 5);
  pre.t_prime = pre.V_prime = 0.0;
  pre.V = 3.0;
  const auto c0 = expand_in_eigenbasis(prepare_state(InitialState{initial::GroundState{pre}}, s), es);
  const auto curve = MicroCurve::per_state(diagonal_fluctuations(eigenstate_expectations(es, o),
                                                                 QuenchOptions{}.micro));
  const auto times = log_time_grid();
  for (auto _ : state) benchmark::DoNotOptimize(quench_trace(es, oe, c0, times, curve));
}
BENCHMARK(BM_QuenchTrace)->Unit(benchmark::kMillisecond);

void BM_DeutschPrediction(benchmark::State& state) {
  DeutschModel m;
  m.h0 = equally_spaced_levels(static_cast<std::size_t>(state.range(0)));
  m.epsilon = 0.5;
  m.band_beta = 0.5;
  m.realizations = 10;
  m.seed = 7;
  std::vector<double> o(m.dim());
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = static_cast<double>(k) / static_cast<double>(o.size());
  for (auto _ : state) benchmark::DoNotOptimize(expectation_prediction(m, o));
}
BENCHMARK(BM_DeutschPrediction)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
