#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qpinem/scattering.hpp"

namespace qpinem {

inline constexpr double kElectronRestKeV = 510.99895;
inline constexpr double kHcEvNm = 1239.8419843320026;

// Grating-coupler geometry for a single diffraction order.
struct StructureParams {
  double period_nm = 733.0;
  double wavelength_nm = 1064.0;
  double theta_rad = 1.5707963267948966;
  double length_um = 56.0;
  int order = 1;
  std::optional<double> field_amplitude;  // V/m; absolute |g| when present

  void validate() const;
};

double beta_from_kinetic_energy(double kinetic_keV);
double kinetic_energy_from_beta(double beta);

// |g| versus electron energy. Relative units (peak 1) without a field amplitude.
double coupling_vs_energy(const StructureParams& s, double kinetic_keV);

// Wavelength satisfying the phase-matching condition at velocity beta.
double phase_matched_wavelength(const StructureParams& s, double beta);
// Electron velocity and energy that are exactly phase matched at s.wavelength_nm.
double phase_matched_beta(const StructureParams& s);
double phase_matched_kinetic_energy(const StructureParams& s);

// Location of the |g| maximum over [lo, hi] keV: dense scan then golden-section refinement.
double peak_kinetic_energy(const StructureParams& s, double lo_keV, double hi_keV, int scan_points = 2001);

// Full width at half maximum of |g|^2 over wavelength at fixed electron energy,
// around the phase-matched wavelength.
double wavelength_ridge_fwhm(const StructureParams& s, double kinetic_keV);

// |g|^2 over energy rows and wavelength columns (normalised when no field amplitude).
Eigen::MatrixXd coupling_map(const StructureParams& s, const std::vector<double>& energy_keV,
                             const std::vector<double>& wavelength_nm);

struct EnsembleSummary {
  int n_segments = 1;
  long samples = 0;
  std::uint64_t seed = 0;
  double mean_g2_eff = 0.0;
  double stderr_g2_eff = 0.0;
  ElectronSpectrum spectrum;  // ensemble-averaged coherent spectrum
  double energy_spread = 0.0;  // rms ladder index
};

// Coupling averaged over N segments with independent random phases.
EnsembleSummary partial_coherence_ensemble(double g_mag, int segments, long samples, std::uint64_t seed,
                                           int k_max = -1);

// Bin-averaged densities (1/eV) on uniform bin centres.
std::vector<double> classical_coherent_spectrum(double g_mag, double hbar_omega, const std::vector<double>& grid);
std::vector<double> classical_thermal_spectrum(double g_mag, double hbar_omega, const std::vector<double>& grid);
double classical_coherent_density(double g_mag, double hbar_omega, double dE);

// Classical coherent spectrum averaged over a thermal Glauber P distribution
// with <|g|^2> = g_mag^2.
std::vector<double> glauber_averaged_classical_spectrum(double g_mag, double hbar_omega,
                                                        const std::vector<double>& grid, long samples,
                                                        std::uint64_t seed);

}  // namespace qpinem
