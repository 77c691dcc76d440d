#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qpinem/amplifier.hpp"
#include "qpinem/fock.hpp"

namespace qpinem {

// Photon energy for 1064 nm light.
inline constexpr double kDefaultHbarOmega = 1.16527;

// Electron ladder index k labels electron energy E0 + k hbar_omega; the
// photon number drops by k. C_p^n is the amplitude for n -> n + p photons.
struct CouplingParams {
  double g_mag = 0.0;    // single-photon coupling |g_q|
  double g_phase = 0.0;  // arg g_q
  double hbar_omega = kDefaultHbarOmega;
  int k_max = 10;

  void validate() const;
};

enum class Regime { automatic, exact, weak };

// Sidebands holding nearly all the weight for classical coupling g_cl.
int default_k_max(double classical_g);

// Weak regime when g_q^2 (<n> + k_max) is small.
Regime resolve_regime(Regime requested, double g_mag, double mean_n, int k_max);

cplx exact_coefficient(int n, int p, const CouplingParams& coupling);
cplx weak_coefficient(int n, int p, const CouplingParams& coupling);

// C_p^n for n = 0..n_max (rows), p = -k_max..k_max (columns p + k_max).
struct CoefficientTable {
  int n_max = 0;
  int k_max = 0;
  Eigen::MatrixXcd values;

  cplx operator()(int n, int p) const { return values(n, p + k_max); }
};
CoefficientTable coefficient_table(const CouplingParams& coupling, int n_max, Regime regime = Regime::exact);

// |C_{-k}^m|^2 for m = 0..n_max (rows), k = -k_max..k_max (columns).
Eigen::MatrixXd transition_weights(const CouplingParams& coupling, int n_max, Regime regime);

struct ElectronSpectrum {
  int k_max = 0;
  std::vector<double> p;   // index k + k_max
  double lost_mass = 0.0;  // probability outside the retained ladder/photon range

  double at(int k) const { return (k < -k_max || k > k_max) ? 0.0 : p[static_cast<size_t>(k + k_max)]; }
  double total() const;
};

ElectronSpectrum electron_spectrum(const PhotonStatistics& stats, const CouplingParams& coupling,
                                   Regime regime = Regime::automatic);
ElectronSpectrum amplified_light_spectrum(const AmplifierParams& params, const CouplingParams& coupling,
                                          Regime regime = Regime::automatic);

// Strong-field limits in terms of the classical coupling strength.
ElectronSpectrum closed_form_coherent_spectrum(double g_classical, int k_max);
ElectronSpectrum closed_form_thermal_spectrum(double g_classical, int k_max);
// Coherent part with |g|^2 = coherent_strength convolved with thermal part
// with <|g|^2> = thermal_strength.
ElectronSpectrum closed_form_mixed_spectrum(double coherent_strength, double thermal_strength, int k_max);

// P(n, k): final photon number n = 0..n_max_final, ladder index k.
struct JointDistribution {
  int k_max = 0;
  Eigen::MatrixXd P;  // rows n, columns k + k_max

  int n_max() const { return static_cast<int>(P.rows()) - 1; }
  std::vector<double> electron_marginal() const;
  std::vector<double> photon_marginal() const;
  // sum_k P(m - k, k): mass originating from initial photon number m.
  std::vector<double> initial_photon_marginal() const;
};
JointDistribution joint_distribution(const PhotonStatistics& stats, const CouplingParams& coupling,
                                     Regime regime = Regime::automatic);

struct ElectronDensityMatrix {
  int k_max = 0;
  Eigen::MatrixXcd rho;  // indices k + k_max

  double trace() const { return rho.diagonal().real().sum(); }
  std::vector<double> populations() const;
};
ElectronDensityMatrix electron_density_matrix(const PhotonState& state, const CouplingParams& coupling,
                                              Regime regime = Regime::automatic);

// Zero-loss-peak kernel on a uniform grid, normalised so sum(density) * step = 1.
struct ZlpKernel {
  std::vector<double> energy;
  std::vector<double> density;
  double step = 0.0;
  double normalization = 1.0;  // factor applied to the raw density
};
ZlpKernel make_zlp_kernel(std::vector<double> energy, std::vector<double> density);
ZlpKernel gaussian_zlp(double fwhm, double step, double half_width_fwhm = 3.0);

struct ContinuousSpectrum {
  std::vector<double> energy;  // electron energy change in eV
  std::vector<double> density;

  double step() const { return energy.size() > 1 ? energy[1] - energy[0] : 0.0; }
  double area() const;
};

// Discrete ladder convolved with the ZLP on a grid aligned with the kernel grid.
ContinuousSpectrum convolve_with_zlp(const ElectronSpectrum& spectrum, const ZlpKernel& kernel, double hbar_omega);
// Same model evaluated on a caller-supplied uniform grid with the kernel's step.
std::vector<double> convolve_on_grid(const ElectronSpectrum& spectrum, const ZlpKernel& kernel, double hbar_omega,
                                     const std::vector<double>& energy);

// Checks that a grid is uniform and returns its step.
double uniform_step(const std::vector<double>& grid, const char* who);

}  // namespace qpinem
