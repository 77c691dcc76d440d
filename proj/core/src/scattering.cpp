#include "qpinem/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpinem/errors.hpp"
#include "qpinem/special.hpp"

namespace qpinem {

namespace {

double parity(int q) { return (q % 2) ? -1.0 : 1.0; }

// Complex columns c_k[m] = C_{-k}^m for k = -K..K, m = 0..N.
std::vector<Eigen::VectorXcd> ladder_columns(const CouplingParams& c, int N, Regime regime) {
  const int K = c.k_max;
  std::vector<Eigen::VectorXcd> cols(2 * K + 1, Eigen::VectorXcd::Zero(N + 1));
  if (regime == Regime::weak) {
    for (int m = 0; m <= N; ++m) {
      std::vector<double> j = bessel_j_sequence(2.0 * c.g_mag * std::sqrt(static_cast<double>(m)), K);
      for (int k = -K; k <= K; ++k) {
        int p = -k;
        double v = j[std::abs(p)] * (p < 0 ? parity(-p) : 1.0);
        cols[k + K][m] = std::polar(1.0, c.g_phase * p) * v;
      }
    }
    return cols;
  }
  double x = c.g_mag * c.g_mag;
  for (int q = 0; q <= K; ++q) {
    std::vector<double> f = ladder_amplitudes(q, N, x);
    // p = +q  <=>  k = -q: C_q^m = e^{i phi q} F_m
    cplx ph = std::polar(1.0, c.g_phase * q);
    for (int m = 0; m <= N; ++m) cols[K - q][m] = ph * f[m];
    if (q == 0) continue;
    // p = -q  <=>  k = +q: C_{-q}^m = e^{-i phi q} (-1)^q F_{m-q}
    cplx pm = std::polar(parity(q), -c.g_phase * q);
    for (int m = q; m <= N; ++m) cols[K + q][m] = pm * f[m - q];
  }
  return cols;
}

double stats_mean(const PhotonStatistics& s) {
  double t = s.total();
  return t > 0.0 ? moment(s, 1) / t : 0.0;
}

}  // namespace

void CouplingParams::validate() const {
  if (!std::isfinite(g_mag) || g_mag < 0.0) throw ValidationError("coupling: |g| must be finite and >= 0");
  if (!std::isfinite(g_phase)) throw ValidationError("coupling: phase must be finite");
  if (!std::isfinite(hbar_omega) || hbar_omega <= 0.0) throw ValidationError("coupling: photon energy must be > 0");
  if (k_max < 0 || k_max > 100000) throw ValidationError("coupling: k_max out of range");
}

int default_k_max(double classical_g) {
  if (!std::isfinite(classical_g) || classical_g < 0.0) throw ValidationError("default_k_max: coupling must be >= 0");
  return static_cast<int>(std::ceil(4.0 * classical_g + 10.0));
}

Regime resolve_regime(Regime requested, double g_mag, double mean_n, int k_max) {
  if (requested != Regime::automatic) return requested;
  return g_mag * g_mag * (mean_n + k_max) < 0.01 ? Regime::weak : Regime::exact;
}

cplx weak_coefficient(int n, int p, const CouplingParams& c) {
  c.validate();
  if (n < 0) throw ValidationError("coefficient: photon number must be >= 0");
  if (n + p < 0) return {0.0, 0.0};
  return std::polar(1.0, c.g_phase * p) * bessel_j(p, 2.0 * c.g_mag * std::sqrt(static_cast<double>(n)));
}

cplx exact_coefficient(int n, int p, const CouplingParams& c) {
  c.validate();
  if (n < 0) throw ValidationError("coefficient: photon number must be >= 0");
  if (n + p < 0) return {0.0, 0.0};
  const int q = std::abs(p);
  const int j = std::min(n, n + p);
  const double x = c.g_mag * c.g_mag;
  double mag;
  if (x == 0.0) {
    mag = q == 0 ? 1.0 : 0.0;
  } else {
    // F = |g|^q e^{x/2} / q! sqrt((j+q)!/j!) 1F1(j+q+1; q+1; -x)
    double log_pref = q * std::log(c.g_mag) + 0.5 * x - log_factorial(q) +
                      0.5 * (log_factorial(j + q) - log_factorial(j));
    mag = NAN;
    if (log_pref < 700.0) {
      try {
        SeriesResult s = hyp1f1_negative(j + q + 1.0, q + 1.0, x);
        double pref = std::exp(log_pref);
        if (std::isfinite(s.error_bound) && pref * s.error_bound < 1e-12) mag = pref * s.value;
      } catch (const NumericalError&) {
      }
    }
    if (std::isnan(mag)) mag = ladder_amplitudes(q, j, x).back();
  }
  double sign = (p < 0) ? parity(q) : 1.0;
  return std::polar(1.0, c.g_phase * p) * (sign * mag);
}

CoefficientTable coefficient_table(const CouplingParams& c, int n_max, Regime regime) {
  c.validate();
  if (n_max < 0) throw ValidationError("coefficient_table: n_max < 0");
  if (regime == Regime::automatic) regime = resolve_regime(regime, c.g_mag, n_max, c.k_max);
  auto cols = ladder_columns(c, n_max, regime);
  CoefficientTable t;
  t.n_max = n_max;
  t.k_max = c.k_max;
  t.values.resize(n_max + 1, 2 * c.k_max + 1);
  // column for p is column for k = -p
  for (int p = -c.k_max; p <= c.k_max; ++p) t.values.col(p + c.k_max) = cols[-p + c.k_max];
  return t;
}

Eigen::MatrixXd transition_weights(const CouplingParams& c, int n_max, Regime regime) {
  c.validate();
  if (n_max < 0) throw ValidationError("transition_weights: n_max < 0");
  const int K = c.k_max;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_max + 1, 2 * K + 1);
  if (regime == Regime::automatic) regime = resolve_regime(regime, c.g_mag, n_max, K);
  if (regime == Regime::weak) {
    for (int m = 0; m <= n_max; ++m) {
      std::vector<double> j = bessel_j_sequence(2.0 * c.g_mag * std::sqrt(static_cast<double>(m)), K);
      for (int k = -K; k <= K; ++k) w(m, k + K) = j[std::abs(k)] * j[std::abs(k)];
    }
    return w;
  }
  double x = c.g_mag * c.g_mag;
  for (int q = 0; q <= K; ++q) {
    std::vector<double> f = ladder_amplitudes(q, n_max, x);
    for (int m = 0; m <= n_max; ++m) w(m, K - q) = f[m] * f[m];
    if (q == 0) continue;
    for (int m = q; m <= n_max; ++m) w(m, K + q) = f[m - q] * f[m - q];
  }
  return w;
}

double ElectronSpectrum::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

ElectronSpectrum electron_spectrum(const PhotonStatistics& stats, const CouplingParams& c, Regime regime) {
  c.validate();
  stats.validate(1e-6);
  const int K = c.k_max;
  const int N = stats.n_max();
  regime = resolve_regime(regime, c.g_mag, stats_mean(stats), K);
  ElectronSpectrum out;
  out.k_max = K;
  out.p.assign(2 * K + 1, 0.0);
  if (regime == Regime::weak) {
    for (int m = 0; m <= N; ++m) {
      double pm = stats.p[m];
      if (pm < 1e-300) continue;
      std::vector<double> j = bessel_j_sequence(2.0 * c.g_mag * std::sqrt(static_cast<double>(m)), K);
      for (int k = -K; k <= K; ++k) out.p[k + K] += j[std::abs(k)] * j[std::abs(k)] * pm;
    }
  } else {
    double x = c.g_mag * c.g_mag;
    for (int q = 0; q <= K; ++q) {
      std::vector<double> f = ladder_amplitudes(q, N, x);
      double minus = 0.0;  // k = -q, photon emitted into the mode
      for (int m = 0; m <= N; ++m) minus += f[m] * f[m] * stats.p[m];
      out.p[K - q] = minus;
      if (q == 0) continue;
      double plus = 0.0;  // k = +q, photons absorbed
      for (int m = q; m <= N; ++m) plus += f[m - q] * f[m - q] * stats.p[m];
      out.p[K + q] = plus;
    }
  }
  out.lost_mass = std::max(0.0, 1.0 - out.total());
  return out;
}

ElectronSpectrum amplified_light_spectrum(const AmplifierParams& params, const CouplingParams& c, Regime regime) {
  return electron_spectrum(amplifier_statistics(params), c, regime);
}

ElectronSpectrum closed_form_coherent_spectrum(double g, int k_max) {
  if (!std::isfinite(g) || g < 0.0 || k_max < 0) throw ValidationError("closed_form_coherent_spectrum: bad arguments");
  std::vector<double> j = bessel_j_sequence(2.0 * g, k_max);
  ElectronSpectrum s;
  s.k_max = k_max;
  s.p.resize(2 * k_max + 1);
  for (int k = -k_max; k <= k_max; ++k) s.p[k + k_max] = j[std::abs(k)] * j[std::abs(k)];
  s.lost_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

ElectronSpectrum closed_form_thermal_spectrum(double g, int k_max) {
  if (!std::isfinite(g) || g < 0.0 || k_max < 0) throw ValidationError("closed_form_thermal_spectrum: bad arguments");
  std::vector<double> i = scaled_bessel_i_sequence(2.0 * g * g, k_max);
  ElectronSpectrum s;
  s.k_max = k_max;
  s.p.resize(2 * k_max + 1);
  for (int k = -k_max; k <= k_max; ++k) s.p[k + k_max] = i[std::abs(k)];
  s.lost_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

ElectronSpectrum closed_form_mixed_spectrum(double coherent_strength, double thermal_strength, int k_max) {
  if (!(coherent_strength >= 0.0) || !(thermal_strength >= 0.0) || k_max < 0) {
    throw ValidationError("closed_form_mixed_spectrum: strengths must be >= 0");
  }
  // Both factors are evaluated on a wider ladder so the convolution is
  // accurate up to k_max.
  int wide = k_max + default_k_max(std::sqrt(coherent_strength) + std::sqrt(thermal_strength));
  std::vector<double> j = bessel_j_sequence(2.0 * std::sqrt(coherent_strength), wide);
  std::vector<double> th = scaled_bessel_i_sequence(2.0 * thermal_strength, 2 * wide);
  ElectronSpectrum s;
  s.k_max = k_max;
  s.p.assign(2 * k_max + 1, 0.0);
  for (int k = -k_max; k <= k_max; ++k) {
    double acc = 0.0;
    for (int l = -wide; l <= wide; ++l) {
      int d = std::abs(k - l);
      if (d > 2 * wide) continue;
      acc += j[std::abs(l)] * j[std::abs(l)] * th[d];
    }
    s.p[k + k_max] = acc;
  }
  s.lost_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

std::vector<double> JointDistribution::electron_marginal() const {
  std::vector<double> out(P.cols());
  for (int c = 0; c < P.cols(); ++c) out[c] = P.col(c).sum();
  return out;
}

std::vector<double> JointDistribution::photon_marginal() const {
  std::vector<double> out(P.rows());
  for (int r = 0; r < P.rows(); ++r) out[r] = P.row(r).sum();
  return out;
}

std::vector<double> JointDistribution::initial_photon_marginal() const {
  std::vector<double> out(P.rows(), 0.0);
  for (int n = 0; n < P.rows(); ++n) {
    for (int k = -k_max; k <= k_max; ++k) {
      int m = n + k;
      if (m >= 0 && m < P.rows()) out[m] += P(n, k + k_max);
    }
  }
  return out;
}

JointDistribution joint_distribution(const PhotonStatistics& stats, const CouplingParams& c, Regime regime) {
  c.validate();
  stats.validate(1e-6);
  const int K = c.k_max;
  const int N = stats.n_max();
  regime = resolve_regime(regime, c.g_mag, stats_mean(stats), K);
  Eigen::MatrixXd w = transition_weights(c, N, regime);
  JointDistribution jd;
  jd.k_max = K;
  jd.P = Eigen::MatrixXd::Zero(N + K + 1, 2 * K + 1);
  for (int m = 0; m <= N; ++m) {
    for (int k = -K; k <= K; ++k) {
      int n = m - k;
      if (n < 0) continue;
      jd.P(n, k + K) = w(m, k + K) * stats.p[m];
    }
  }
  return jd;
}

std::vector<double> ElectronDensityMatrix::populations() const {
  std::vector<double> out(rho.rows());
  for (int i = 0; i < rho.rows(); ++i) out[i] = rho(i, i).real();
  return out;
}

ElectronDensityMatrix electron_density_matrix(const PhotonState& state, const CouplingParams& c, Regime regime) {
  c.validate();
  const int K = c.k_max;
  const int N = state.n_max();
  PhotonStatistics st = state.statistics();
  regime = resolve_regime(regime, c.g_mag, stats_mean(st), K);
  auto cols = ladder_columns(c, N, regime);
  const Eigen::MatrixXcd& rho = state.rho();
  ElectronDensityMatrix out;
  out.k_max = K;
  out.rho = Eigen::MatrixXcd::Zero(2 * K + 1, 2 * K + 1);
  // Final photon number n = m - k is shared by both indices.
  for (int k = -K; k <= K; ++k) {
    for (int kp = k; kp <= K; ++kp) {
      if (state.is_diagonal() && kp != k) continue;
      int lo = std::max({0, -k, -kp});
      int hi = N - std::max(k, kp);
      cplx acc(0.0, 0.0);
      const auto& ck = cols[k + K];
      const auto& ckp = cols[kp + K];
      for (int n = lo; n <= hi; ++n) acc += rho(n + k, n + kp) * ck[n + k] * std::conj(ckp[n + kp]);
      out.rho(k + K, kp + K) = acc;
      if (kp != k) out.rho(kp + K, k + K) = std::conj(acc);
    }
  }
  return out;
}

double uniform_step(const std::vector<double>& grid, const char* who) {
  if (grid.size() < 2) throw ValidationError(std::string(who) + ": grid needs at least two points");
  double h = grid[1] - grid[0];
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError(std::string(who) + ": grid must be increasing");
  for (size_t i = 1; i < grid.size(); ++i) {
    double d = grid[i] - grid[i - 1];
    if (std::abs(d - h) > 1e-6 * h) throw ValidationError(std::string(who) + ": grid is not uniform");
  }
  return (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
}

ZlpKernel make_zlp_kernel(std::vector<double> energy, std::vector<double> density) {
  if (energy.size() != density.size()) throw ValidationError("zlp: energy and density lengths differ");
  ZlpKernel z;
  z.step = uniform_step(energy, "zlp");
  double area = 0.0;
  for (double d : density) {
    if (!std::isfinite(d) || d < 0.0) throw ValidationError("zlp: density must be finite and non-negative");
    area += d;
  }
  area *= z.step;
  if (!(area > 0.0)) throw ValidationError("zlp: kernel has zero area");
  z.normalization = 1.0 / area;
  for (double& d : density) d *= z.normalization;
  z.energy = std::move(energy);
  z.density = std::move(density);
  return z;
}

ZlpKernel gaussian_zlp(double fwhm, double step, double half_width_fwhm) {
  if (!(fwhm > 0.0) || !(step > 0.0) || !(half_width_fwhm > 0.0)) throw ValidationError("gaussian_zlp: bad arguments");
  double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  int half = static_cast<int>(std::ceil(half_width_fwhm * fwhm / step));
  std::vector<double> e, d;
  for (int i = -half; i <= half; ++i) {
    double x = i * step;
    e.push_back(x);
    d.push_back(std::exp(-0.5 * x * x / (sigma * sigma)));
  }
  return make_zlp_kernel(std::move(e), std::move(d));
}

double ContinuousSpectrum::area() const {
  return std::accumulate(density.begin(), density.end(), 0.0) * step();
}

namespace {

double kernel_at(const ZlpKernel& z, double x) {
  double t = (x - z.energy.front()) / z.step;
  double fl = std::floor(t);
  long i = static_cast<long>(fl);
  double f = t - fl;
  long n = static_cast<long>(z.density.size());
  auto d = [&](long j) { return (j < 0 || j >= n) ? 0.0 : z.density[static_cast<size_t>(j)]; };
  if (i < -1 || i >= n) return 0.0;
  return (1.0 - f) * d(i) + f * d(i + 1);
}

void check_step(const ZlpKernel& z, double hbar_omega) {
  if (z.density.empty()) throw ValidationError("zlp: empty kernel");
  if (!(hbar_omega > 0.0)) throw ValidationError("zlp: photon energy must be > 0");
  if (z.step > hbar_omega / 4.0) throw ValidationError("zlp: grid step must not exceed a quarter of the photon energy");
}

}  // namespace

std::vector<double> convolve_on_grid(const ElectronSpectrum& s, const ZlpKernel& z, double hbar_omega,
                                     const std::vector<double>& energy) {
  check_step(z, hbar_omega);
  double h = uniform_step(energy, "convolve");
  if (std::abs(h - z.step) > 1e-6 * z.step) {
    throw ValidationError("convolve: measured grid step is incommensurate with the ZLP kernel step");
  }
  std::vector<double> out(energy.size(), 0.0);
  for (int k = -s.k_max; k <= s.k_max; ++k) {
    double pk = s.at(k);
    if (pk == 0.0) continue;
    double shift = k * hbar_omega;
    for (size_t i = 0; i < energy.size(); ++i) out[i] += pk * kernel_at(z, energy[i] - shift);
  }
  return out;
}

ContinuousSpectrum convolve_with_zlp(const ElectronSpectrum& s, const ZlpKernel& z, double hbar_omega) {
  check_step(z, hbar_omega);
  double h = z.step;
  double span = s.k_max * hbar_omega;
  long lo = static_cast<long>(std::floor(-span / h)) - 1;
  long hi = static_cast<long>(z.density.size()) + static_cast<long>(std::ceil(span / h)) + 1;
  ContinuousSpectrum out;
  for (long j = lo; j <= hi; ++j) out.energy.push_back(z.energy.front() + j * h);
  out.density = convolve_on_grid(s, z, hbar_omega, out.energy);
  return out;
}

}  // namespace qpinem
