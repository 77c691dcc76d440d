#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qpinem/scattering.hpp"

namespace qpinem {

// N interactions, each with amplitude c (coherent hop) or probability p
// (incoherent hop). beta = N c is the accumulated coherent strength.
struct WalkConfig {
  int steps = 1000;
  cplx amplitude{0.0, 0.0};  // per-step coherent hop amplitude c
  double hop_probability = 0.0;  // per-step incoherent hop probability p
  int k_max = 10;

  void validate() const;
};

// Electron ladder distribution after a coherent walk: psi_k <- s psi_k + c psi_{k+1} - c* psi_{k-1}.
ElectronSpectrum quantum_walk(const WalkConfig& config);
// Classical walk: P_k <- (1 - 2p) P_k + p P_{k+1} + p P_{k-1}.
ElectronSpectrum random_walk(const WalkConfig& config);

struct MixedWalkConfig {
  int steps = 10000;
  double beta = 1.0;   // total strength |beta|
  double r_th = 0.0;   // thermal fraction of the interactions
  int k_max = 10;

  void validate() const;
};

// Coherent stage of strength |beta| sqrt(1 - r_th), then r_th N incoherent
// steps with p = |beta|^2 / N.
ElectronSpectrum mixed_walk(const MixedWalkConfig& config);

struct WalkStep {
  enum class Kind { coherent, thermal };
  Kind kind = Kind::coherent;
  double strength = 0.0;  // |c| for coherent steps, p for thermal steps
};

// Electron density matrix after an arbitrary schedule of steps, starting
// from the zero-loss state. Used to check that the step order is irrelevant.
Eigen::MatrixXcd walk_schedule(const std::vector<WalkStep>& schedule, int k_max);

}  // namespace qpinem
