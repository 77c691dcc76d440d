#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qpinem;

namespace {
std::vector<double> centred_grid(double half, double step) {
  std::vector<double> g;
  int n = static_cast<int>(std::ceil(half / step));
  for (int i = -n; i <= n; ++i) g.push_back(i * step);
  return g;
}
double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

TEST(Coupling, Kinematics) {
  EXPECT_EQ(beta_from_kinetic_energy(0.0), 0.0);
  EXPECT_NEAR(beta_from_kinetic_energy(189.0), 0.6834, 1e-4);
  double prev = 0.0;
  for (double t = 50.0; t <= 250.0; t += 5.0) {
    double b = beta_from_kinetic_energy(t);
    EXPECT_GT(b, prev);
    prev = b;
    EXPECT_NEAR(kinetic_energy_from_beta(b), t, 1e-9);
  }
}

TEST(Coupling, PhaseMatchedWavelength) {
  StructureParams s;
  EXPECT_NEAR(phase_matched_wavelength(s, 0.6889), 1064.0, 0.5);
  StructureParams s2 = s;
  s2.order = 2;
  EXPECT_NEAR(phase_matched_wavelength(s2, 0.6889), 0.5 * phase_matched_wavelength(s, 0.6889), 1e-9);
  EXPECT_THROW(phase_matched_wavelength(s, 1.0), ValidationError);
}

TEST(Coupling, SincPeakAtPhaseMatching) {
  StructureParams s;
  double t = phase_matched_kinetic_energy(s);
  EXPECT_NEAR(t, 194.0, 0.5);
  EXPECT_NEAR(coupling_vs_energy(s, t), 1.0, 1e-12);
  EXPECT_NEAR(peak_kinetic_energy(s, 100.0, 300.0), t, 1e-3);
}

TEST(Coupling, PeakSolvesDispersion) {
  StructureParams s;
  double t = peak_kinetic_energy(s, 150.0, 250.0);
  double lam = phase_matched_wavelength(s, beta_from_kinetic_energy(t));
  EXPECT_NEAR(lam, s.wavelength_nm, 1e-3);
}

TEST(Coupling, AbsoluteScale) {
  StructureParams s;
  s.field_amplitude = 1e7;
  double t = phase_matched_kinetic_energy(s);
  double hw = kHcEvNm / s.wavelength_nm;
  EXPECT_NEAR(coupling_vs_energy(s, t), 1e7 * 56e-6 / hw, 1e-9);
}

TEST(Coupling, MapConsistency) {
  StructureParams s;
  std::vector<double> e{180.0, 194.0}, l{1064.0};
  Eigen::MatrixXd m = coupling_map(s, e, l);
  EXPECT_NEAR(m(0, 0), std::pow(coupling_vs_energy(s, 180.0), 2), 1e-15);
  EXPECT_NEAR(m(1, 0), std::pow(coupling_vs_energy(s, 194.0), 2), 1e-15);
}

TEST(Coupling, PartialCoherenceSingleSegment) {
  EnsembleSummary e = partial_coherence_ensemble(1.0, 1, 1000, 7);
  EXPECT_NEAR(e.mean_g2_eff, 1.0, 1e-12);
  EXPECT_NEAR(e.stderr_g2_eff, 0.0, 1e-12);
  EXPECT_LT(oracle::tv(e.spectrum, closed_form_coherent_spectrum(1.0, e.spectrum.k_max)), 1e-12);
}

TEST(Coupling, PartialCoherenceMean) {
  EnsembleSummary e = partial_coherence_ensemble(1.0, 16, 100000, 42);
  EXPECT_LT(std::abs(e.mean_g2_eff - 1.0 / 16.0), 3.0 * e.stderr_g2_eff);
}

TEST(Coupling, PartialCoherenceDeterministic) {
  EnsembleSummary a = partial_coherence_ensemble(1.0, 4, 10000, 3);
  EnsembleSummary b = partial_coherence_ensemble(1.0, 4, 10000, 3);
  EnsembleSummary c = partial_coherence_ensemble(1.0, 4, 10000, 4);
  EXPECT_EQ(a.mean_g2_eff, b.mean_g2_eff);
  EXPECT_NE(a.mean_g2_eff, c.mean_g2_eff);
}

TEST(Coupling, RidgeWidthScalesInverselyWithLength) {
  StructureParams s;
  const double e = phase_matched_kinetic_energy(s);
  StructureParams longer = s;
  longer.length_um = 5.0 * s.length_um;
  const double w = wavelength_ridge_fwhm(s, e);
  EXPECT_NEAR(wavelength_ridge_fwhm(longer, e), w / 5.0, 0.01 * w / 5.0);
  // sinc^2 half maximum at |x| = 1.3915573; x = pi L (1/beta - cos theta) d(1/lambda)
  const double beta = phase_matched_beta(s);
  const double lam = s.wavelength_nm;
  const double approx = 2.0 * 1.3915573 * lam * lam / (std::numbers::pi * s.length_um * 1000.0 * (1.0 / beta));
  EXPECT_NEAR(w, approx, 1e-3 * approx);
}

TEST(Coupling, ClassicalCoherentSpectrum) {
  const double g = 1.0, hw = 1.2, h = 0.01;
  auto grid = centred_grid(3.0, h);
  auto d = classical_coherent_spectrum(g, hw, grid);
  EXPECT_NEAR(sum(d) * h, 1.0, 1e-8);
  EXPECT_NEAR(classical_coherent_density(g, hw, 0.0), 1.0 / (2.0 * std::numbers::pi * g * hw), 1e-15);
  EXPECT_EQ(classical_coherent_density(g, hw, 2.0 * g * hw + 1e-9), 0.0);
  for (size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], d[d.size() - 1 - i], 1e-12);
  EXPECT_THROW(classical_coherent_spectrum(g, hw, centred_grid(2.0, h)), ValidationError);
}

TEST(Coupling, ClassicalThermalSpectrum) {
  const double g = 1.0, hw = 1.2, h = 0.01;
  auto grid = centred_grid(14.0, h);
  auto d = classical_thermal_spectrum(g, hw, grid);
  EXPECT_NEAR(sum(d) * h, 1.0, 1e-10);
  double var = 0.0;
  for (size_t i = 0; i < d.size(); ++i) var += grid[i] * grid[i] * d[i] * h;
  EXPECT_NEAR(std::sqrt(var), std::sqrt(2.0) * g * hw, 1e-4);
}

TEST(Coupling, GlauberAverageIsGaussian) {
  const double g = 1.0, hw = 1.0, h = 0.05;
  auto grid = centred_grid(10.0, h);
  auto mc = glauber_averaged_classical_spectrum(g, hw, grid, 200000, 11);
  auto th = classical_thermal_spectrum(g, hw, grid);
  EXPECT_LT(oracle::total_variation(mc, th, h), 1e-2);
}

TEST(Coupling, QuantumCombHasPeaksClassicalDoesNot) {
  const double g = 1.0, hw = 1.0;
  ZlpKernel z = gaussian_zlp(0.3 * hw, 0.01);
  ContinuousSpectrum q = convolve_with_zlp(closed_form_coherent_spectrum(g, 10), z, hw);
  auto cl = classical_coherent_spectrum(g, hw, q.energy);
  // interior of the classical support only
  const double edge = 2.0 * g * hw - 2.0 * z.step;
  auto count_max = [&](const std::vector<double>& v) {
    int n = 0;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
      if (std::abs(q.energy[i]) < edge && v[i] > v[i - 1] && v[i] > v[i + 1]) ++n;
    }
    return n;
  };
  EXPECT_EQ(count_max(q.density), 3);
  EXPECT_EQ(count_max(cl), 0);
}
