#include "qpinem/amplifier.hpp"

#include <cmath>
#include <sstream>

#include "qpinem/errors.hpp"
#include "qpinem/special.hpp"

namespace qpinem {

namespace {

constexpr int kMaxNMax = 50'000'000;

// log p_n for n = 0..n_max.
std::vector<double> amplifier_log_p(const AmplifierParams& prm, int n_max) {
  std::vector<double> lp(static_cast<size_t>(n_max) + 1);
  double a2 = std::norm(prm.alpha);
  double G = prm.gain;
  if (G == 1.0) {
    double la = a2 > 0.0 ? std::log(a2) : 0.0;
    for (int n = 0; n <= n_max; ++n) {
      lp[n] = a2 > 0.0 ? -a2 + n * la - log_factorial(n) : (n == 0 ? 0.0 : -INFINITY);
    }
    return lp;
  }
  double y = a2 / (G - 1.0);
  std::vector<double> lag = log_laguerre_negative(0, n_max, y);
  double l0 = -a2 - std::log(G);
  double lr = std::log1p(-1.0 / G);
  for (int n = 0; n <= n_max; ++n) lp[n] = l0 + n * lr + lag[n];
  return lp;
}

}  // namespace

AmplifierParams AmplifierParams::from_db(cplx alpha, double gain_db) {
  AmplifierParams p{alpha, std::pow(10.0, gain_db / 10.0)};
  p.validate();
  return p;
}

double AmplifierParams::gain_db() const { return 10.0 * std::log10(gain); }

void AmplifierParams::validate() const {
  if (!std::isfinite(gain) || gain < 1.0) throw ValidationError("amplifier: gain must be finite and >= 1 (0 dB)");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw ValidationError("amplifier: seed amplitude must be finite");
}

int default_n_max_amplifier(const AmplifierParams& params, double tail_tol) {
  params.validate();
  AmplifierMoments m{std::norm(params.alpha) * params.gain + params.gain - 1.0, 0.0};
  // Grow a candidate until the retained mass reaches 1 - tol.
  int n = std::max(16, default_n_max_poisson(m.mean));
  for (;;) {
    std::vector<double> lp = amplifier_log_p(params, n);
    double acc = 0.0;
    for (double v : lp) acc += std::exp(v);
    if (1.0 - acc <= tail_tol) {
      // Walk back to the smallest sufficient cutoff.
      int k = n;
      while (k > 0 && 1.0 - (acc - std::exp(lp[k])) <= tail_tol) {
        acc -= std::exp(lp[k]);
        --k;
      }
      return k;
    }
    if (n > kMaxNMax / 2) throw TruncationError("amplifier: required n_max too large", n * 2);
    n *= 2;
  }
}

PhotonStatistics amplifier_statistics(const AmplifierParams& params, std::optional<int> n_max, double tail_tol) {
  params.validate();
  int N = n_max ? *n_max : default_n_max_amplifier(params, tail_tol);
  if (N < 0 || N > kMaxNMax) throw ValidationError("amplifier: n_max out of range");
  std::vector<double> lp = amplifier_log_p(params, N);
  PhotonStatistics s;
  s.p.resize(lp.size());
  double acc = 0.0;
  for (size_t n = 0; n < lp.size(); ++n) {
    s.p[n] = std::exp(lp[n]);
    acc += s.p[n];
  }
  s.tail_mass = std::max(0.0, 1.0 - acc);
  if (s.tail_mass > tail_tol) {
    int need = default_n_max_amplifier(params, tail_tol);
    std::ostringstream os;
    os << "amplifier: tail mass " << s.tail_mass << " exceeds tolerance; need n_max >= " << need;
    throw TruncationError(os.str(), need);
  }
  return s;
}

PhotonState amplifier_density_matrix(const AmplifierParams& params, std::optional<int> n_max, double tail_tol) {
  PhotonStatistics s = amplifier_statistics(params, n_max, tail_tol);
  int dim = static_cast<int>(s.p.size());
  int N = dim - 1;
  double G = params.gain;
  double a2 = std::norm(params.alpha);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) rho(n, n) = s.p[n];
  if (a2 == 0.0) return PhotonState(std::move(rho), s.tail_mass);

  double la = 0.5 * std::log(a2);
  double ph = -std::arg(params.alpha);
  if (G == 1.0) {
    // Pure coherent state.
    std::vector<double> amp(dim);
    for (int n = 0; n < dim; ++n) amp[n] = std::sqrt(s.p[n]);
    for (int n = 0; n < dim; ++n) {
      for (int m = n + 1; m < dim; ++m) {
        cplx v = std::polar(amp[n] * amp[m], ph * (m - n));
        rho(n, m) = v;
        rho(m, n) = std::conj(v);
      }
    }
    return PhotonState(std::move(rho), s.tail_mass);
  }

  double y = a2 / (G - 1.0);
  double lG = std::log(G);
  double lGm1 = std::log(G - 1.0);
  for (int d = 1; d <= N; ++d) {
    std::vector<double> lag = log_laguerre_negative(d, N - d, y);
    double base = d * la - a2 - lG - 0.5 * d * lG;
    for (int n = 0; n + d <= N; ++n) {
      double lv = base - n * lG + n * lGm1 + 0.5 * (log_factorial(n) - log_factorial(n + d)) + lag[n];
      cplx v = std::polar(std::exp(lv), ph * d);
      rho(n, n + d) = v;
      rho(n + d, n) = std::conj(v);
    }
  }
  return PhotonState(std::move(rho), s.tail_mass);
}

AmplifierMoments amplifier_mean_and_g2(const AmplifierParams& params) {
  params.validate();
  double G = params.gain;
  double coh = G * std::norm(params.alpha);
  double mean = coh + G - 1.0;
  if (!(mean > 0.0)) throw UndefinedError("amplifier: g2 undefined for vacuum output");
  double r = coh / mean;
  return {mean, 2.0 - r * r};
}

double thermality(const AmplifierParams& params) {
  params.validate();
  double G = params.gain;
  double den = G * std::norm(params.alpha) + G - 1.0;
  if (!(den > 0.0)) throw UndefinedError("thermality: undefined for vacuum output");
  return (G - 1.0) / den;
}

AmplifierParams attenuate(const AmplifierParams& params, double eta) {
  params.validate();
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("attenuate: transmission must lie in (0, 1]");
  double Gp = 1.0 + eta * (params.gain - 1.0);
  return {params.alpha * std::sqrt(eta * params.gain / Gp), Gp};
}

AmplifierParams params_for_output_mean(double gain, double n_mean) {
  if (!std::isfinite(gain) || gain < 1.0) throw ValidationError("params_for_output_mean: gain must be >= 1");
  if (!(n_mean > 0.0) || !std::isfinite(n_mean)) throw ValidationError("params_for_output_mean: n_mean must be > 0");
  if (gain - 1.0 <= n_mean) {
    double a2 = (n_mean + 1.0 - gain) / gain;
    return {cplx(std::sqrt(a2), 0.0), gain};
  }
  return {cplx(0.0, 0.0), 1.0 + n_mean};
}

}  // namespace qpinem
