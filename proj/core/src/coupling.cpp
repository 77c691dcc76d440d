#include "qpinem/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qpinem/errors.hpp"
#include "qpinem/special.hpp"

namespace qpinem {

namespace {

constexpr long kChunk = 4096;

std::mt19937_64 chunk_engine(std::uint64_t seed, long chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(static_cast<std::uint64_t>(chunk) >> 32)};
  return std::mt19937_64(seq);
}

double sinc_argument(const StructureParams& s, double wavelength_nm, double beta) {
  double L = s.length_um * 1000.0;
  return std::numbers::pi * L *
         (std::cos(s.theta_rad) / wavelength_nm + s.order / s.period_nm - 1.0 / (wavelength_nm * beta));
}

double coupling_at(const StructureParams& s, double wavelength_nm, double kinetic_keV) {
  double beta = beta_from_kinetic_energy(kinetic_keV);
  if (beta <= 0.0) return 0.0;
  double shape = std::abs(sinc(sinc_argument(s, wavelength_nm, beta)));
  if (!s.field_amplitude) return shape;
  double hw = kHcEvNm / wavelength_nm;
  return *s.field_amplitude * s.length_um * 1e-6 / hw * shape;
}

double check_grid(const std::vector<double>& grid) { return uniform_step(grid, "classical spectrum"); }

// Arcsine CDF for half-width A.
double arcsine_cdf(double x, double A) {
  if (x <= -A) return 0.0;
  if (x >= A) return 1.0;
  return 0.5 + std::asin(x / A) / std::numbers::pi;
}

}  // namespace

void StructureParams::validate() const {
  if (!(period_nm > 0.0) || !(wavelength_nm > 0.0) || !(length_um > 0.0)) {
    throw ValidationError("structure: lengths must be > 0");
  }
  if (order == 0) throw ValidationError("structure: diffraction order must be non-zero");
  if (!std::isfinite(theta_rad)) throw ValidationError("structure: angle must be finite");
  if (field_amplitude && !(*field_amplitude >= 0.0)) throw ValidationError("structure: field amplitude must be >= 0");
}

double beta_from_kinetic_energy(double kinetic_keV) {
  if (!(kinetic_keV >= 0.0) || !std::isfinite(kinetic_keV)) throw ValidationError("kinetic energy must be >= 0");
  double gamma = 1.0 + kinetic_keV / kElectronRestKeV;
  return std::sqrt(1.0 - 1.0 / (gamma * gamma));
}

double kinetic_energy_from_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ValidationError("beta must lie in [0, 1)");
  return kElectronRestKeV * (1.0 / std::sqrt(1.0 - beta * beta) - 1.0);
}

double coupling_vs_energy(const StructureParams& s, double kinetic_keV) {
  s.validate();
  return coupling_at(s, s.wavelength_nm, kinetic_keV);
}

double phase_matched_wavelength(const StructureParams& s, double beta) {
  s.validate();
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("phase_matched_wavelength: beta must lie in (0, 1)");
  double lam = (s.period_nm / s.order) * (1.0 / beta - std::cos(s.theta_rad));
  if (!(lam > 0.0)) throw ValidationError("phase_matched_wavelength: no physical solution for this geometry");
  return lam;
}

double phase_matched_beta(const StructureParams& s) {
  s.validate();
  double inv = s.wavelength_nm * s.order / s.period_nm + std::cos(s.theta_rad);
  if (!(inv > 1.0)) throw ValidationError("phase_matched_beta: geometry cannot be phase matched below c");
  return 1.0 / inv;
}

double phase_matched_kinetic_energy(const StructureParams& s) { return kinetic_energy_from_beta(phase_matched_beta(s)); }

double peak_kinetic_energy(const StructureParams& s, double lo, double hi, int scan_points) {
  s.validate();
  if (!(hi > lo) || lo < 0.0 || scan_points < 3) throw ValidationError("peak_kinetic_energy: bad scan range");
  double h = (hi - lo) / (scan_points - 1);
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i < scan_points; ++i) {
    double v = coupling_vs_energy(s, lo + i * h);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * h;
  double b = lo + std::min(scan_points - 1, best + 1) * h;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = coupling_vs_energy(s, c), fd = coupling_vs_energy(s, d);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = coupling_vs_energy(s, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = coupling_vs_energy(s, d);
    }
  }
  return 0.5 * (a + b);
}

double wavelength_ridge_fwhm(const StructureParams& s, double kinetic_keV) {
  s.validate();
  const double beta = beta_from_kinetic_energy(kinetic_keV);
  const double lam0 = phase_matched_wavelength(s, beta);
  auto f = [&](double lam) {
    double g = coupling_at(s, lam, kinetic_keV);
    return g * g;
  };
  const double half = 0.5 * f(lam0);
  if (!(half > 0.0)) throw UndefinedError("wavelength_ridge_fwhm: no coupling at the phase-matched wavelength");
  auto edge = [&](double dir) {
    double inner = lam0, outer = lam0;
    double d = 1e-9 * lam0;
    while (f(outer) >= half) {
      inner = outer;
      d *= 2.0;
      outer = lam0 + dir * d;
      if (d > lam0) throw NumericalError("wavelength_ridge_fwhm: half maximum not bracketed");
    }
    for (int it = 0; it < 200 && std::abs(outer - inner) > 1e-13 * lam0; ++it) {
      double mid = 0.5 * (inner + outer);
      (f(mid) >= half ? inner : outer) = mid;
    }
    return 0.5 * (inner + outer);
  };
  return edge(1.0) - edge(-1.0);
}

Eigen::MatrixXd coupling_map(const StructureParams& s, const std::vector<double>& energy_keV,
                             const std::vector<double>& wavelength_nm) {
  s.validate();
  if (energy_keV.empty() || wavelength_nm.empty()) throw ValidationError("coupling_map: grids must be non-empty");
  Eigen::MatrixXd m(energy_keV.size(), wavelength_nm.size());
  for (size_t i = 0; i < energy_keV.size(); ++i) {
    for (size_t j = 0; j < wavelength_nm.size(); ++j) {
      double g = coupling_at(s, wavelength_nm[j], energy_keV[i]);
      m(i, j) = g * g;
    }
  }
  return m;
}

EnsembleSummary partial_coherence_ensemble(double g_mag, int segments, long samples, std::uint64_t seed, int k_max) {
  if (!(g_mag >= 0.0) || !std::isfinite(g_mag)) throw ValidationError("partial coherence: |g| must be >= 0");
  if (segments < 1) throw ValidationError("partial coherence: need at least one segment");
  if (samples < 1) throw ValidationError("partial coherence: need at least one sample");
  if (k_max < 0) k_max = default_k_max(g_mag);
  EnsembleSummary out;
  out.n_segments = segments;
  out.samples = samples;
  out.seed = seed;
  out.spectrum.k_max = k_max;
  out.spectrum.p.assign(2 * k_max + 1, 0.0);
  std::vector<double> spec(k_max + 1, 0.0);
  double sum = 0.0, sum2 = 0.0;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  long chunks = (samples + kChunk - 1) / kChunk;
  for (long ch = 0; ch < chunks; ++ch) {
    std::mt19937_64 eng = chunk_engine(seed, ch);
    long n = std::min(kChunk, samples - ch * kChunk);
    for (long i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < segments; ++j) acc += std::polar(1.0, phase(eng));
      double geff = g_mag * std::abs(acc) / segments;
      double g2 = geff * geff;
      sum += g2;
      sum2 += g2 * g2;
      std::vector<double> jv = bessel_j_sequence(2.0 * geff, k_max);
      for (int k = 0; k <= k_max; ++k) spec[k] += jv[k] * jv[k];
    }
  }
  double ns = static_cast<double>(samples);
  out.mean_g2_eff = sum / ns;
  double var = samples > 1 ? std::max(0.0, (sum2 - sum * sum / ns) / (ns - 1.0)) : 0.0;
  out.stderr_g2_eff = std::sqrt(var / ns);
  double second = 0.0;
  for (int k = -k_max; k <= k_max; ++k) {
    double v = spec[std::abs(k)] / ns;
    out.spectrum.p[k + k_max] = v;
    second += static_cast<double>(k) * k * v;
  }
  out.spectrum.lost_mass = std::max(0.0, 1.0 - out.spectrum.total());
  out.energy_spread = std::sqrt(second);
  return out;
}

double classical_coherent_density(double g_mag, double hbar_omega, double dE) {
  if (!(g_mag > 0.0) || !(hbar_omega > 0.0)) throw ValidationError("classical spectrum: need |g| > 0 and photon energy > 0");
  double A = 2.0 * g_mag * hbar_omega;
  if (std::abs(dE) >= A) return 0.0;
  return 1.0 / (std::numbers::pi * std::sqrt(A * A - dE * dE));
}

std::vector<double> classical_coherent_spectrum(double g_mag, double hbar_omega, const std::vector<double>& grid) {
  if (!(g_mag > 0.0) || !(hbar_omega > 0.0)) throw ValidationError("classical spectrum: need |g| > 0 and photon energy > 0");
  double h = check_grid(grid);
  double A = 2.0 * g_mag * hbar_omega;
  if (grid.front() - 0.5 * h > -A || grid.back() + 0.5 * h < A) {
    throw ValidationError("classical_coherent_spectrum: grid does not cover the support +-2|g|hbar_omega");
  }
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    out[i] = (arcsine_cdf(grid[i] + 0.5 * h, A) - arcsine_cdf(grid[i] - 0.5 * h, A)) / h;
  }
  return out;
}

std::vector<double> classical_thermal_spectrum(double g_mag, double hbar_omega, const std::vector<double>& grid) {
  if (!(g_mag > 0.0) || !(hbar_omega > 0.0)) throw ValidationError("classical spectrum: need |g| > 0 and photon energy > 0");
  double h = check_grid(grid);
  double w = 2.0 * g_mag * hbar_omega;  // density exp(-(x/w)^2) / (sqrt(pi) w)
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    double lo = (grid[i] - 0.5 * h) / w, hi = (grid[i] + 0.5 * h) / w;
    out[i] = 0.5 * (std::erf(hi) - std::erf(lo)) / h;
  }
  return out;
}

std::vector<double> glauber_averaged_classical_spectrum(double g_mag, double hbar_omega,
                                                        const std::vector<double>& grid, long samples,
                                                        std::uint64_t seed) {
  if (!(g_mag > 0.0) || !(hbar_omega > 0.0)) throw ValidationError("glauber average: need |g| > 0 and photon energy > 0");
  if (samples < 1) throw ValidationError("glauber average: need at least one sample");
  double h = check_grid(grid);
  double e0 = grid.front() - 0.5 * h;
  long nb = static_cast<long>(grid.size());
  std::vector<double> acc(grid.size(), 0.0);
  std::exponential_distribution<double> expo(1.0);
  long chunks = (samples + kChunk - 1) / kChunk;
  for (long ch = 0; ch < chunks; ++ch) {
    std::mt19937_64 eng = chunk_engine(seed, ch);
    long n = std::min(kChunk, samples - ch * kChunk);
    for (long s = 0; s < n; ++s) {
      double A = 2.0 * g_mag * hbar_omega * std::sqrt(expo(eng));
      if (A == 0.0) {
        long b = static_cast<long>(std::floor((0.0 - e0) / h));
        if (b >= 0 && b < nb) acc[b] += 1.0;
        continue;
      }
      long first = std::max(0L, static_cast<long>(std::floor((-A - e0) / h)));
      long last = std::min(nb - 1, static_cast<long>(std::floor((A - e0) / h)));
      double prev = arcsine_cdf(e0 + first * h, A);
      for (long b = first; b <= last; ++b) {
        double cur = arcsine_cdf(e0 + (b + 1) * h, A);
        acc[b] += cur - prev;
        prev = cur;
      }
    }
  }
  for (double& v : acc) v /= static_cast<double>(samples) * h;
  return acc;
}

}  // namespace qpinem
