#include "qpinem/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpinem/errors.hpp"
#include "qpinem/special.hpp"

namespace qpinem {

namespace {

constexpr int kMaxNMax = 50'000'000;

void check_tail(const char* who, double tail, double tol, int required) {
  if (tail > tol) {
    std::ostringstream os;
    os << who << ": tail mass " << tail << " exceeds tolerance " << tol << "; need n_max >= " << required;
    throw TruncationError(os.str(), required);
  }
}

// Poisson tail beyond n_max, and the smallest n_max meeting tol.
std::pair<double, int> poisson_tail(double mean, int n_max, double tol) {
  if (mean == 0.0) return {0.0, 0};
  double log_mean = std::log(mean);
  auto logp = [&](int n) { return -mean + n * log_mean - log_factorial(n); };
  double tail = 0.0;
  int n = n_max + 1;
  for (;; ++n) {
    double t = std::exp(logp(n));
    tail += t;
    if (n > mean && t < 1e-30 * std::max(tail, 1e-300)) break;
    if (n > mean && t == 0.0) break;
  }
  int required = n_max;
  if (tail > tol) {
    double rest = tail;
    required = n_max;
    while (rest > tol) {
      ++required;
      rest -= std::exp(logp(required));
    }
  }
  return {tail, required};
}

}  // namespace

double PhotonStatistics::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

void PhotonStatistics::validate(double tol) const {
  if (p.empty()) throw ValidationError("PhotonStatistics: empty distribution");
  for (double v : p) {
    if (!std::isfinite(v) || v < -tol) throw ValidationError("PhotonStatistics: negative or non-finite probability");
  }
  if (std::abs(total() + tail_mass - 1.0) > std::max(tol, 1e-9)) {
    throw ValidationError("PhotonStatistics: probabilities plus tail mass do not sum to one");
  }
}

PhotonState::PhotonState(Eigen::MatrixXcd rho, double tail_mass) : rho_(std::move(rho)), tail_mass_(tail_mass) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw ValidationError("PhotonState: matrix must be square and non-empty");
  double scale = std::max(1.0, rho_.cwiseAbs().maxCoeff());
  double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * scale) throw ValidationError("PhotonState: matrix is not Hermitian");
  for (int i = 0; i < rho_.rows(); ++i) {
    if (rho_(i, i).real() < -1e-10) throw ValidationError("PhotonState: negative diagonal entry");
  }
  if (std::abs(trace() + tail_mass_ - 1.0) > 1e-8) throw ValidationError("PhotonState: trace plus tail mass is not one");
  diagonal_ = true;
  for (int j = 0; j < rho_.cols() && diagonal_; ++j) {
    for (int i = 0; i < rho_.rows(); ++i) {
      if (i != j && rho_(i, j) != cplx(0.0, 0.0)) {
        diagonal_ = false;
        break;
      }
    }
  }
}

double PhotonState::trace() const { return rho_.diagonal().real().sum(); }

PhotonStatistics PhotonState::statistics() const {
  PhotonStatistics s;
  s.p.resize(static_cast<size_t>(dim()));
  for (int i = 0; i < dim(); ++i) s.p[i] = std::max(0.0, rho_(i, i).real());
  s.tail_mass = tail_mass_;
  return s;
}

PhotonState PhotonState::padded(int n_max) const {
  if (n_max < this->n_max()) throw ValidationError("PhotonState::padded: cannot shrink");
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  big.topLeftCorner(dim(), dim()) = rho_;
  PhotonState out;
  out.rho_ = std::move(big);
  out.tail_mass_ = tail_mass_;
  out.diagonal_ = diagonal_;
  return out;
}

int default_n_max_poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) throw ValidationError("mean photon number must be finite and >= 0");
  return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0)));
}

int default_n_max_thermal(double n_bar, double tail_tol) {
  if (n_bar < 0.0 || !std::isfinite(n_bar)) throw ValidationError("mean photon number must be finite and >= 0");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ValidationError("tail_tol must lie in (0, 1)");
  if (n_bar == 0.0) return 0;
  // Tail of the geometric law is (n/(n+1))^{N+1}.
  double need = std::log(tail_tol) / std::log(n_bar / (n_bar + 1.0));
  return std::max(0, static_cast<int>(std::ceil(need)) - 1);
}

PhotonStatistics coherent_statistics(double mean, std::optional<int> n_max, double tail_tol) {
  if (mean < 0.0 || !std::isfinite(mean)) throw ValidationError("coherent: mean photon number must be finite and >= 0");
  int N = n_max.value_or(default_n_max_poisson(mean));
  if (N < 0 || N > kMaxNMax) throw ValidationError("coherent: n_max out of range");
  PhotonStatistics s;
  s.p.assign(static_cast<size_t>(N) + 1, 0.0);
  if (mean == 0.0) {
    s.p[0] = 1.0;
    return s;
  }
  double lm = std::log(mean);
  for (int n = 0; n <= N; ++n) s.p[n] = std::exp(-mean + n * lm - log_factorial(n));
  auto [tail, required] = poisson_tail(mean, N, tail_tol);
  check_tail("coherent", tail, tail_tol, required);
  s.tail_mass = tail;
  return s;
}

PhotonStatistics thermal_statistics(double n_bar, std::optional<int> n_max, double tail_tol) {
  int N = n_max.value_or(default_n_max_thermal(n_bar, tail_tol));
  if (N < 0 || N > kMaxNMax) throw ValidationError("thermal: n_max out of range");
  PhotonStatistics s;
  s.p.assign(static_cast<size_t>(N) + 1, 0.0);
  if (n_bar == 0.0) {
    s.p[0] = 1.0;
    return s;
  }
  double lr = std::log(n_bar / (n_bar + 1.0));
  double l0 = -std::log1p(n_bar);
  for (int n = 0; n <= N; ++n) s.p[n] = std::exp(l0 + n * lr);
  double tail = std::exp((N + 1.0) * lr);
  check_tail("thermal", tail, tail_tol, default_n_max_thermal(n_bar, tail_tol));
  s.tail_mass = tail;
  return s;
}

PhotonStatistics fock_statistics(int n, std::optional<int> n_max) {
  if (n < 0) throw ValidationError("fock: photon number must be >= 0");
  int N = n_max.value_or(n);
  if (N < n) throw TruncationError("fock: n_max below the occupied level", n);
  PhotonStatistics s;
  s.p.assign(static_cast<size_t>(N) + 1, 0.0);
  s.p[n] = 1.0;
  return s;
}

PhotonState coherent_state(cplx alpha, std::optional<int> n_max, double tail_tol) {
  double mean = std::norm(alpha);
  PhotonStatistics s = coherent_statistics(mean, n_max, tail_tol);
  int dim = static_cast<int>(s.p.size());
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim);
  double phase = std::arg(alpha);
  for (int n = 0; n < dim; ++n) amp[n] = std::polar(std::sqrt(s.p[n]), n * phase);
  Eigen::MatrixXcd rho = amp * amp.adjoint();
  return PhotonState(std::move(rho), s.tail_mass);
}

PhotonState diagonal_state(const PhotonStatistics& stats) {
  int dim = static_cast<int>(stats.p.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) rho(n, n) = stats.p[n];
  return PhotonState(std::move(rho), stats.tail_mass);
}

PhotonState thermal_state(double n_bar, std::optional<int> n_max, double tail_tol) {
  return diagonal_state(thermal_statistics(n_bar, n_max, tail_tol));
}

PhotonState fock_state(int n, std::optional<int> n_max) { return diagonal_state(fock_statistics(n, n_max)); }

double moment(const PhotonStatistics& stats, int m) {
  if (m < 0) throw ValidationError("moment: order must be >= 0");
  double acc = 0.0;
  for (size_t n = 0; n < stats.p.size(); ++n) acc += std::pow(static_cast<double>(n), m) * stats.p[n];
  return acc;
}

double mean_photon_number(const PhotonStatistics& stats) {
  double t = stats.total();
  if (t <= 0.0) throw UndefinedError("mean_photon_number: zero total probability");
  return moment(stats, 1) / t;
}

double g_n(const PhotonStatistics& stats, int order) {
  if (order < 1) throw ValidationError("g_n: order must be >= 1");
  double t = stats.total();
  double mean = t > 0.0 ? moment(stats, 1) / t : 0.0;
  if (!(mean > 0.0)) throw UndefinedError("g_n: undefined for zero mean photon number");
  double fact = 0.0;
  for (size_t n = 0; n < stats.p.size(); ++n) {
    double f = 1.0;
    for (int j = 0; j < order; ++j) f *= static_cast<double>(n) - j;
    fact += f * stats.p[n];
  }
  fact /= t;
  return fact / std::pow(mean, order);
}

}  // namespace qpinem
