#include <benchmark/benchmark.h>

#include "qpinem/qpinem.hpp"

using namespace qpinem;

namespace {

void BM_FitAmplifierSpectrum(benchmark::State& state) {
  ZlpKernel z = gaussian_zlp(0.6, 0.01);
  ContinuousSpectrum m;
  for (int i = -600; i <= 600; ++i) m.energy.push_back(i * z.step);
  m.density = amplifier_model_trace(0.3, 0.5, z, kDefaultHbarOmega, m.energy);
  CouplingParams c;
  c.g_mag = 0.016;
  for (auto _ : state) benchmark::DoNotOptimize(fit_amplifier_spectrum(m, z, c));
}
BENCHMARK(BM_FitAmplifierSpectrum)->Unit(benchmark::kMillisecond);

void BM_ReconstructThermal(benchmark::State& state) {
  CouplingParams c;
  c.g_mag = 0.1;
  c.k_max = default_k_max(1.0) + 6;
  ElectronSpectrum s = electron_spectrum(thermal_statistics(100.0), c, Regime::exact);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_photon_statistics(s, c));
}
BENCHMARK(BM_ReconstructThermal)->Unit(benchmark::kMillisecond);

void BM_Nnls(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(2 * n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Random(2 * n);
  Eigen::MatrixXd H = A.transpose() * A;
  Eigen::VectorXd f = A.transpose() * b;
  for (auto _ : state) benchmark::DoNotOptimize(nnls_normal_equations(H, f));
}
BENCHMARK(BM_Nnls)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
