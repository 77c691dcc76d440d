#include <benchmark/benchmark.h>

#include "qpinem/qpinem.hpp"

using namespace qpinem;

namespace {

CouplingParams coupling(double g, int k_max) {
  CouplingParams c;
  c.g_mag = g;
  c.k_max = k_max;
  return c;
}

void BM_CoefficientTableExact(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coefficient_table(coupling(0.1, 15), n_max, Regime::exact));
  state.SetComplexityN(n_max);
}
BENCHMARK(BM_CoefficientTableExact)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ThermalSpectrumWeak(benchmark::State& state) {
  const double n = static_cast<double>(state.range(0));
  PhotonStatistics s = thermal_statistics(n);
  CouplingParams c = coupling(1.0 / std::sqrt(n), default_k_max(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(electron_spectrum(s, c, Regime::weak));
}
BENCHMARK(BM_ThermalSpectrumWeak)->Arg(100)->Arg(10000);

void BM_ElectronDensityMatrixCoherent(benchmark::State& state) {
  PhotonState psi = coherent_state(cplx(10.0, 0.0));
  CouplingParams c = coupling(0.1, default_k_max(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(electron_density_matrix(psi, c));
}
BENCHMARK(BM_ElectronDensityMatrixCoherent)->Unit(benchmark::kMillisecond);

void BM_FidelityProfileThermal(benchmark::State& state) {
  PhotonState rho = thermal_state(100.0);
  CouplingParams c = coupling(0.1, 10);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_profile(rho, c, -3, 3));
}
BENCHMARK(BM_FidelityProfileThermal)->Unit(benchmark::kMillisecond);

void BM_MixedWalk(benchmark::State& state) {
  MixedWalkConfig m;
  m.steps = static_cast<int>(state.range(0));
  m.r_th = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(mixed_walk(m));
}
BENCHMARK(BM_MixedWalk)->Arg(1000)->Arg(10000);

void BM_ZlpConvolution(benchmark::State& state) {
  ZlpKernel z = gaussian_zlp(0.6, 0.01);
  ElectronSpectrum s = closed_form_thermal_spectrum(1.0, 14);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_with_zlp(s, z, kDefaultHbarOmega));
}
BENCHMARK(BM_ZlpConvolution);

}  // namespace

BENCHMARK_MAIN();
