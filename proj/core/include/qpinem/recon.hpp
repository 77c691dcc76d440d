#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qpinem/amplifier.hpp"
#include "qpinem/scattering.hpp"

namespace qpinem {

// Two-parameter amplified-light model: a is the thermal and b the coherent
// coupling strength (both |g|^2-like). b / a is the seed photon number.
struct FitOptions {
  std::optional<std::pair<double, double>> init;  // (a, b)
  bool poisson_weighting = false;
  int max_iterations = 10000;
  double rel_tol = 1e-6;
};

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // no measurable sidebands
  double g2 = 2.0;
  double n_in = 0.0;        // b / a
  std::optional<double> n_mean;  // (a + b) / g^2 when the coupling is known
};

// Model spectrum for given (a, b) on the measured grid.
std::vector<double> amplifier_model_trace(double a, double b, const ZlpKernel& zlp, double hbar_omega,
                                          const std::vector<double>& energy);

FitResult fit_amplifier_spectrum(const ContinuousSpectrum& measured, const ZlpKernel& zlp,
                                 const CouplingParams& coupling, const FitOptions& options = {});

// Amplifier parameters equivalent to a fitted (a, b) at effective coupling g.
AmplifierParams amplifier_from_fit(double a, double b, double g_eff);

struct ReconstructionOptions {
  double reg_lambda = 1e-3;
  std::optional<int> n_max;
  Regime regime = Regime::automatic;
};

struct ReconstructionResult {
  PhotonStatistics stats;      // clipped and renormalised
  Eigen::VectorXd raw;         // solver output before renormalisation
  double kernel_condition = 0.0;
  double residual = 0.0;       // ||A p - P||
  int iterations = 0;
  bool infeasible = false;
};

// Mean photon number implied by the sideband variance, sum k^2 P_k = g^2 (2<n> + 1).
double estimate_mean_photons(const ElectronSpectrum& spectrum, double g_mag);

ReconstructionResult reconstruct_photon_statistics(const ElectronSpectrum& spectrum, const CouplingParams& coupling,
                                                   const ReconstructionOptions& options = {});

struct TransitionRow {
  double n_in = 0.0;
  double gain = 1.0;
  double n_out = 0.0;        // amplifier output before any attenuation
  double n_probe = 0.0;      // mean of the state seen by the electron
  double g2_theory = 2.0;
  double g2_reconstructed = 2.0;
};

// For each seed: amplify, optionally attenuate to probe_mean, synthesise the
// spectrum, reconstruct, compare g2.
std::vector<TransitionRow> g2_transition_curve(const std::vector<double>& seeds,
                                               const std::function<double(double)>& gain_of_seed,
                                               const CouplingParams& coupling, std::optional<double> probe_mean,
                                               const ReconstructionOptions& options = {});

}  // namespace qpinem
