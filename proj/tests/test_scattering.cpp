#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qpinem;

namespace {
CouplingParams coupling(double g, int k_max, double phase = 0.0) {
  CouplingParams c;
  c.g_mag = g;
  c.g_phase = phase;
  c.k_max = k_max;
  return c;
}
}  // namespace

TEST(Scattering, ExactCoefficientMatchesMatrixExponential) {
  for (double g : {0.05, 0.5}) {
    for (int n : {0, 7, 30}) {
      auto ref = oracle::expm_coefficients(g, 0.4, n, 15);
      for (int p = -15; p <= 15; ++p) {
        cplx c = exact_coefficient(n, p, coupling(g, 15, 0.4));
        EXPECT_LT(std::abs(c - ref[p + 15]), 1e-10) << g << " " << n << " " << p;
      }
    }
  }
}

TEST(Scattering, TableMatchesSingleCoefficient) {
  CouplingParams c = coupling(0.3, 8, -1.1);
  CoefficientTable t = coefficient_table(c, 60, Regime::exact);
  for (int n : {0, 5, 33, 60}) {
    for (int p = -8; p <= 8; ++p) EXPECT_LT(std::abs(t(n, p) - exact_coefficient(n, p, c)), 1e-12);
  }
}

TEST(Scattering, SeriesFallbackAgreesAtLargePhotonNumber) {
  // Large n g^2 forces the recurrence path; compare with neighbouring table values.
  CouplingParams c = coupling(0.1, 5);
  CoefficientTable t = coefficient_table(c, 4000, Regime::exact);
  for (int p = -5; p <= 5; ++p) EXPECT_LT(std::abs(t(4000, p) - exact_coefficient(4000, p, c)), 1e-12);
}

TEST(Scattering, Unitarity) {
  CouplingParams c = coupling(0.2, 60);
  CoefficientTable t = coefficient_table(c, 500, Regime::exact);
  for (int n : {0, 1, 100, 440}) {
    double acc = 0.0;
    for (int p = -60; p <= 60; ++p) acc += std::norm(t(n, p));
    EXPECT_NEAR(acc, 1.0, 1e-10) << n;
  }
}

TEST(Scattering, WeakRegimeApproachesExact) {
  CouplingParams c = coupling(0.002, 6);
  for (int n : {100, 2000}) {
    for (int p = -6; p <= 6; ++p) {
      EXPECT_LT(std::abs(exact_coefficient(n, p, c) - weak_coefficient(n, p, c)), 2e-3) << n << " " << p;
    }
  }
}

TEST(Scattering, ZeroCouplingIsDelta) {
  ElectronSpectrum s = electron_spectrum(thermal_statistics(5.0), coupling(0.0, 4));
  EXPECT_NEAR(s.at(0), 1.0 - 1e-8, 1e-8);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(s.at(k), 0.0);
    EXPECT_EQ(s.at(-k), 0.0);
  }
}

TEST(Scattering, SinglePhotonSpectrum) {
  double g = 0.4, x = g * g;
  ElectronSpectrum s = electron_spectrum(fock_statistics(1), coupling(g, 3), Regime::exact);
  // absorb the photon: |<0|D|1>|^2 = x e^{-x}
  EXPECT_NEAR(s.at(1), x * std::exp(-x), 1e-14);
  EXPECT_NEAR(s.at(0), std::pow(1.0 - x, 2) * std::exp(-x), 1e-14);
  EXPECT_EQ(s.at(2), 0.0);
}

TEST(Scattering, LargePhotonNumberLimits) {
  const double n = 1e4;
  for (double g : {0.5, 1.0}) {
    CouplingParams c = coupling(g / std::sqrt(n), default_k_max(g));
    ElectronSpectrum coh = electron_spectrum(coherent_statistics(n), c);
    ElectronSpectrum th = electron_spectrum(thermal_statistics(n), c);
    EXPECT_LT(oracle::tv(coh, closed_form_coherent_spectrum(g, c.k_max)), 1e-3);
    EXPECT_LT(oracle::tv(th, closed_form_thermal_spectrum(g, c.k_max)), 1e-3);
  }
}

TEST(Scattering, ClosedFormsNormalised) {
  EXPECT_NEAR(closed_form_coherent_spectrum(2.0, 30).total(), 1.0, 1e-13);
  EXPECT_NEAR(closed_form_thermal_spectrum(2.0, 60).total(), 1.0, 1e-12);
  ElectronSpectrum mix = closed_form_mixed_spectrum(0.7, 0.3, 30);
  EXPECT_NEAR(mix.total(), 1.0, 1e-12);
  // variance adds: 2 b + 2 a
  double var = 0.0;
  for (int k = -30; k <= 30; ++k) var += k * k * mix.at(k);
  EXPECT_NEAR(var, 2.0, 1e-10);
}

TEST(Scattering, MixedReducesToPureForms) {
  EXPECT_LT(oracle::tv(closed_form_mixed_spectrum(1.0, 0.0, 20), closed_form_coherent_spectrum(1.0, 20)), 1e-13);
  EXPECT_LT(oracle::tv(closed_form_mixed_spectrum(0.0, 1.0, 20), closed_form_thermal_spectrum(1.0, 20)), 1e-13);
}

TEST(Scattering, JointDistributionConservesInitialPhotons) {
  PhotonStatistics st = thermal_statistics(3.0);
  CouplingParams c = coupling(0.3, 25);
  JointDistribution jd = joint_distribution(st, c, Regime::exact);
  std::vector<double> m = jd.initial_photon_marginal();
  for (int n = 0; n <= st.n_max(); ++n) EXPECT_NEAR(m[n], st.p[n], 1e-8) << n;
  ElectronSpectrum s = electron_spectrum(st, c, Regime::exact);
  std::vector<double> pk = jd.electron_marginal();
  for (int k = -25; k <= 25; ++k) EXPECT_NEAR(pk[k + 25], s.at(k), 1e-14);
}

TEST(Scattering, DensityMatrixPopulationsMatchSpectrum) {
  PhotonState st = coherent_state(cplx(3.0, 1.0));
  CouplingParams c = coupling(0.2, 12, 0.3);
  ElectronDensityMatrix rho = electron_density_matrix(st, c, Regime::exact);
  ElectronSpectrum s = electron_spectrum(st.statistics(), c, Regime::exact);
  for (int k = -12; k <= 12; ++k) EXPECT_NEAR(rho.rho(k + 12, k + 12).real(), s.at(k), 1e-12);
  EXPECT_LT((rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Scattering, RegimeSelection) {
  EXPECT_EQ(resolve_regime(Regime::automatic, 0.001, 100.0, 10), Regime::weak);
  EXPECT_EQ(resolve_regime(Regime::automatic, 0.1, 100.0, 10), Regime::exact);
  EXPECT_EQ(resolve_regime(Regime::weak, 0.1, 100.0, 10), Regime::weak);
}

TEST(Scattering, ZlpConvolutionPreservesArea) {
  ZlpKernel z = gaussian_zlp(0.6, 0.01);
  EXPECT_NEAR(std::accumulate(z.density.begin(), z.density.end(), 0.0) * z.step, 1.0, 1e-14);
  ElectronSpectrum s = closed_form_coherent_spectrum(1.3, 12);
  ContinuousSpectrum c = convolve_with_zlp(s, z, kDefaultHbarOmega);
  EXPECT_NEAR(c.area(), s.total(), 1e-12);
}

TEST(Scattering, ZlpRejectsCoarseOrMismatchedGrid) {
  ElectronSpectrum s = closed_form_coherent_spectrum(1.0, 5);
  EXPECT_THROW(convolve_with_zlp(s, gaussian_zlp(0.6, 0.4), 1.0), ValidationError);
  ZlpKernel z = gaussian_zlp(0.6, 0.01);
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(-1.0 + 0.013 * i);
  EXPECT_THROW(convolve_on_grid(s, z, 1.0, grid), ValidationError);
}

TEST(Scattering, ZlpKernelRecordsNormalisation) {
  ZlpKernel z = make_zlp_kernel({-0.1, 0.0, 0.1}, {1.0, 2.0, 1.0});
  EXPECT_NEAR(z.normalization, 1.0 / 0.4, 1e-12);
  EXPECT_THROW(make_zlp_kernel({0.0, 0.1, 0.3}, {1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(make_zlp_kernel({0.0, 0.1}, {-1.0, 1.0}), ValidationError);
}
