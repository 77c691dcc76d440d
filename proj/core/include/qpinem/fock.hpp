#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qpinem {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-8;

// Photon-number distribution p_n, n = 0..n_max. Not renormalised after
// truncation: sum(p) = 1 - tail_mass.
struct PhotonStatistics {
  std::vector<double> p;
  double tail_mass = 0.0;

  int n_max() const { return static_cast<int>(p.size()) - 1; }
  double total() const;
  void validate(double tol = 1e-9) const;
};

// Truncated single-mode density matrix.
class PhotonState {
 public:
  PhotonState() = default;
  PhotonState(Eigen::MatrixXcd rho, double tail_mass = 0.0);

  int n_max() const { return static_cast<int>(rho_.rows()) - 1; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& rho() const { return rho_; }
  double tail_mass() const { return tail_mass_; }
  bool is_diagonal() const { return diagonal_; }

  double trace() const;
  PhotonStatistics statistics() const;
  PhotonState padded(int n_max) const;

 private:
  Eigen::MatrixXcd rho_;
  double tail_mass_ = 0.0;
  bool diagonal_ = true;
};

// Truncation defaults. Each is sufficient for tail <= tol.
int default_n_max_poisson(double mean);
int default_n_max_thermal(double n_bar, double tail_tol = kDefaultTailTol);

PhotonStatistics coherent_statistics(double mean, std::optional<int> n_max = {},
                                     double tail_tol = kDefaultTailTol);
PhotonStatistics thermal_statistics(double n_bar, std::optional<int> n_max = {},
                                    double tail_tol = kDefaultTailTol);
PhotonStatistics fock_statistics(int n, std::optional<int> n_max = {});

PhotonState coherent_state(cplx alpha, std::optional<int> n_max = {},
                           double tail_tol = kDefaultTailTol);
PhotonState thermal_state(double n_bar, std::optional<int> n_max = {},
                          double tail_tol = kDefaultTailTol);
PhotonState fock_state(int n, std::optional<int> n_max = {});
PhotonState diagonal_state(const PhotonStatistics& stats);

// sum_n n^m p_n over the truncated support.
double moment(const PhotonStatistics& stats, int m);
double mean_photon_number(const PhotonStatistics& stats);
// <n(n-1)...(n-m+1)> / <n>^m with both moments normalised by the retained mass.
double g_n(const PhotonStatistics& stats, int order);
inline double g2(const PhotonStatistics& stats) { return g_n(stats, 2); }

}  // namespace qpinem
