#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qpinem/scattering.hpp"

namespace qpinem {

double purity(const ElectronDensityMatrix& rho);
double purity(const Eigen::MatrixXcd& rho);

// sum_{n,k} |P(n,k) - p_n P_k| with both marginals taken from P.
double correlations(const JointDistribution& joint);

struct PostMeasurement {
  PhotonState state;             // conditional photon state, trace one
  double detection_probability;  // N^(k)
};

// Photon state conditioned on detecting the electron at ladder index k.
// Rows n = 0..max(n_max, n_max - k) so every k shares the input basis.
PostMeasurement post_measurement_state(const PhotonState& input, const CouplingParams& coupling, int k,
                                       Regime regime = Regime::weak);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2. States of different size
// are zero-padded to a common basis.
double fidelity(const PhotonState& a, const PhotonState& b);
double fidelity(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct FidelityPoint {
  int k = 0;
  double fidelity = 0.0;
  double detection_probability = 0.0;
};
std::vector<FidelityPoint> fidelity_profile(const PhotonState& input, const CouplingParams& coupling, int k_min,
                                            int k_max, Regime regime = Regime::weak);

}  // namespace qpinem
