#pragma once

#include <complex>
#include <optional>

#include "qpinem/fock.hpp"

namespace qpinem {

// Phase-insensitive linear amplifier seeded by a coherent state.
struct AmplifierParams {
  cplx alpha{0.0, 0.0};
  double gain = 1.0;  // linear power gain G >= 1

  static AmplifierParams from_db(cplx alpha, double gain_db);
  double gain_db() const;
  void validate() const;
};

PhotonStatistics amplifier_statistics(const AmplifierParams& params, std::optional<int> n_max = {},
                                      double tail_tol = kDefaultTailTol);
PhotonState amplifier_density_matrix(const AmplifierParams& params, std::optional<int> n_max = {},
                                     double tail_tol = kDefaultTailTol);

struct AmplifierMoments {
  double mean = 0.0;
  double g2 = 0.0;
};
AmplifierMoments amplifier_mean_and_g2(const AmplifierParams& params);

// Fraction of the output mean photon number contributed by amplified vacuum noise.
double thermality(const AmplifierParams& params);

// Amplified state after a loss channel with transmission eta. Stays in the
// same family: G' = 1 + eta (G - 1), alpha' = alpha sqrt(eta G / G').
AmplifierParams attenuate(const AmplifierParams& params, double eta);

// Output state with the requested mean for a given gain. The seed is chosen so
// that G|alpha|^2 + G - 1 = n_mean; when the vacuum noise alone exceeds
// n_mean the output is attenuated to n_mean, which leaves a thermal state.
AmplifierParams params_for_output_mean(double gain, double n_mean);

// Smallest n_max for which the amplifier tail mass is below tol.
int default_n_max_amplifier(const AmplifierParams& params, double tail_tol = kDefaultTailTol);

}  // namespace qpinem
