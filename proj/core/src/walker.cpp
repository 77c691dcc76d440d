#include "qpinem/walker.hpp"

#include <algorithm>
#include <cmath>

#include "qpinem/errors.hpp"

namespace qpinem {

namespace {

// Lattice half-width that keeps truncation loss negligible for strength b
// accumulated over `steps` hops.
int lattice_half_width(int steps, double b, int k_max) {
  int spread = static_cast<int>(std::ceil(4.0 * b + 40.0));
  return std::max(k_max, std::min(steps, spread));
}

ElectronSpectrum crop(const std::vector<double>& prob, int half, int k_max) {
  ElectronSpectrum s;
  s.k_max = k_max;
  s.p.assign(2 * k_max + 1, 0.0);
  for (int k = -std::min(half, k_max); k <= std::min(half, k_max); ++k) s.p[k + k_max] = prob[k + half];
  s.lost_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

void thermal_step(std::vector<double>& P, std::vector<double>& tmp, double p) {
  size_t n = P.size();
  for (size_t i = 0; i < n; ++i) {
    double left = i > 0 ? P[i - 1] : 0.0;
    double right = i + 1 < n ? P[i + 1] : 0.0;
    tmp[i] = (1.0 - 2.0 * p) * P[i] + p * (left + right);
  }
  P.swap(tmp);
}

}  // namespace

void WalkConfig::validate() const {
  if (steps < 0) throw ValidationError("walk: steps must be >= 0");
  if (k_max < 0) throw ValidationError("walk: k_max must be >= 0");
  if (2.0 * std::norm(amplitude) > 1.0) throw ValidationError("walk: need 2|c|^2 <= 1");
  if (!(hop_probability >= 0.0 && hop_probability <= 0.5)) throw ValidationError("walk: need 0 <= p <= 1/2");
}

void MixedWalkConfig::validate() const {
  if (steps <= 0) throw ValidationError("mixed walk: steps must be > 0");
  if (k_max < 0) throw ValidationError("mixed walk: k_max must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("mixed walk: beta must be >= 0");
  if (!(r_th >= 0.0 && r_th <= 1.0)) throw ValidationError("mixed walk: r_th must lie in [0, 1]");
  if (beta * beta / steps > 0.5) throw ValidationError("mixed walk: too few steps for this beta");
}

ElectronSpectrum quantum_walk(const WalkConfig& cfg) {
  cfg.validate();
  double b = std::abs(cfg.amplitude) * cfg.steps;
  int half = lattice_half_width(cfg.steps, b, cfg.k_max);
  int n = 2 * half + 1;
  std::vector<cplx> psi(n, 0.0), next(n);
  psi[half] = 1.0;
  const cplx c = cfg.amplitude;
  const double s = std::sqrt(1.0 - 2.0 * std::norm(c));
  for (int t = 0; t < cfg.steps; ++t) {
    for (int i = 0; i < n; ++i) {
      cplx up = i + 1 < n ? psi[i + 1] : 0.0;
      cplx down = i > 0 ? psi[i - 1] : 0.0;
      next[i] = s * psi[i] + c * up - std::conj(c) * down;
    }
    psi.swap(next);
  }
  std::vector<double> prob(n);
  for (int i = 0; i < n; ++i) prob[i] = std::norm(psi[i]);
  return crop(prob, half, cfg.k_max);
}

ElectronSpectrum random_walk(const WalkConfig& cfg) {
  cfg.validate();
  double b = std::sqrt(cfg.hop_probability * cfg.steps);
  int half = lattice_half_width(cfg.steps, b, cfg.k_max);
  std::vector<double> P(2 * half + 1, 0.0), tmp(P.size());
  P[half] = 1.0;
  for (int t = 0; t < cfg.steps; ++t) thermal_step(P, tmp, cfg.hop_probability);
  return crop(P, half, cfg.k_max);
}

ElectronSpectrum mixed_walk(const MixedWalkConfig& cfg) {
  cfg.validate();
  double coherent = cfg.beta * std::sqrt(1.0 - cfg.r_th);
  double n_th = cfg.r_th * cfg.steps;
  int full = static_cast<int>(std::floor(n_th));
  double frac = n_th - full;
  double p = cfg.beta * cfg.beta / cfg.steps;
  int half = std::max(cfg.k_max, static_cast<int>(std::ceil(4.0 * cfg.beta + 40.0)));
  ElectronSpectrum start = closed_form_coherent_spectrum(coherent, half);
  std::vector<double> P = start.p, tmp(P.size());
  for (int t = 0; t < full; ++t) thermal_step(P, tmp, p);
  if (frac > 0.0) thermal_step(P, tmp, p * frac);
  return crop(P, half, cfg.k_max);
}

Eigen::MatrixXcd walk_schedule(const std::vector<WalkStep>& schedule, int k_max) {
  if (k_max < 0) throw ValidationError("walk_schedule: k_max must be >= 0");
  const int n = 2 * k_max + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  rho(k_max, k_max) = 1.0;
  Eigen::MatrixXcd tmp(n, n);
  for (const WalkStep& st : schedule) {
    if (st.kind == WalkStep::Kind::coherent) {
      if (!(st.strength >= 0.0) || 2.0 * st.strength * st.strength > 1.0) {
        throw ValidationError("walk_schedule: coherent step needs 2|c|^2 <= 1");
      }
      const double c = st.strength;
      const double s = std::sqrt(1.0 - 2.0 * c * c);
      // U = s + c T - c T^dagger with (T psi)_k = psi_{k+1}; rho -> U rho U^dagger
      Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        U(i, i) = s;
        if (i + 1 < n) U(i, i + 1) = c;
        if (i > 0) U(i, i - 1) = -c;
      }
      tmp.noalias() = U * rho;
      rho.noalias() = tmp * U.adjoint();
    } else {
      const double p = st.strength;
      if (!(p >= 0.0 && p <= 0.5)) throw ValidationError("walk_schedule: thermal step needs 0 <= p <= 1/2");
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          cplx up = (i + 1 < n && j + 1 < n) ? rho(i + 1, j + 1) : cplx(0.0);
          cplx down = (i > 0 && j > 0) ? rho(i - 1, j - 1) : cplx(0.0);
          tmp(i, j) = (1.0 - 2.0 * p) * rho(i, j) + p * (up + down);
        }
      }
      rho.swap(tmp);
    }
  }
  return rho;
}

}  // namespace qpinem
