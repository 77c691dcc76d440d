#include "qpinem/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpinem/errors.hpp"
#include "qpinem/special.hpp"

namespace qpinem {

double purity(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw ValidationError("purity: matrix must be square");
  return rho.cwiseAbs2().sum();
}

double purity(const ElectronDensityMatrix& rho) { return purity(rho.rho); }

double correlations(const JointDistribution& jd) {
  std::vector<double> pn = jd.photon_marginal();
  std::vector<double> pk = jd.electron_marginal();
  double t = jd.P.sum();
  if (!(t > 0.0)) throw UndefinedError("correlations: empty joint distribution");
  double acc = 0.0;
  for (int n = 0; n < jd.P.rows(); ++n) {
    for (int c = 0; c < jd.P.cols(); ++c) acc += std::abs(jd.P(n, c) / t - (pn[n] / t) * (pk[c] / t));
  }
  return acc;
}

namespace {

// D_k^n = C_{-k}^{n+k} for final photon numbers n = 0..N-k (initial <= N).
Eigen::VectorXcd conditional_amplitudes(const CouplingParams& c, int N, int k, Regime regime) {
  int rows = std::max(N, N - k) + 1;
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(rows);
  int q = std::abs(k);
  double ph = -c.g_phase * k;
  if (regime == Regime::weak) {
    for (int n = std::max(0, -k); n + k <= N; ++n) {
      double z = 2.0 * c.g_mag * std::sqrt(static_cast<double>(n + k));
      d[n] = std::polar(1.0, ph) * bessel_j(-k, z);
    }
    return d;
  }
  std::vector<double> f = ladder_amplitudes(q, N, c.g_mag * c.g_mag);
  double sign = (k > 0 && (q % 2)) ? -1.0 : 1.0;
  for (int n = std::max(0, -k); n + k <= N; ++n) {
    int j = std::min(n, n + k);
    d[n] = std::polar(sign, ph) * f[j];
  }
  return d;
}

}  // namespace

PostMeasurement post_measurement_state(const PhotonState& input, const CouplingParams& c, int k, Regime regime) {
  c.validate();
  const int N = input.n_max();
  if (regime == Regime::automatic) {
    PhotonStatistics s = input.statistics();
    double t = s.total();
    regime = resolve_regime(regime, c.g_mag, t > 0.0 ? moment(s, 1) / t : 0.0, c.k_max);
  }
  Eigen::VectorXcd d = conditional_amplitudes(c, N, k, regime);
  const int rows = static_cast<int>(d.size());
  const Eigen::MatrixXcd& rho = input.rho();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
  int lo = std::max(0, -k);
  int hi = N - k;
  double norm = 0.0;
  if (input.is_diagonal()) {
    for (int n = lo; n <= hi; ++n) {
      out(n, n) = rho(n + k, n + k) * std::norm(d[n]);
      norm += out(n, n).real();
    }
  } else {
    for (int n = lo; n <= hi; ++n) {
      for (int np = lo; np <= hi; ++np) out(n, np) = rho(n + k, np + k) * d[n] * std::conj(d[np]);
      norm += out(n, n).real();
    }
  }
  if (!(norm > 1e-300)) {
    throw UndefinedError("post_measurement_state: detection probability is zero for k = " + std::to_string(k));
  }
  out /= norm;
  return {PhotonState(std::move(out), 0.0), norm};
}

namespace {

bool is_diag(const Eigen::MatrixXcd& m) {
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

// Restrict to the rows/cols where either state has weight; fidelity is
// unchanged and the eigenproblems shrink.
std::vector<int> joint_support(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  std::vector<int> idx;
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i).real() > 0.0 || b(i, i).real() > 0.0) idx.push_back(i);
  }
  return idx;
}

Eigen::MatrixXcd take(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
  int n = static_cast<int>(idx.size());
  Eigen::MatrixXcd out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out(i, j) = m(idx[i], idx[j]);
  }
  return out;
}

}  // namespace

double fidelity(const Eigen::MatrixXcd& a_in, const Eigen::MatrixXcd& b_in) {
  if (a_in.rows() != a_in.cols() || b_in.rows() != b_in.cols()) throw ValidationError("fidelity: matrices must be square");
  int dim = static_cast<int>(std::max(a_in.rows(), b_in.rows()));
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
  a.topLeftCorner(a_in.rows(), a_in.cols()) = a_in;
  b.topLeftCorner(b_in.rows(), b_in.cols()) = b_in;

  if (is_diag(a) && is_diag(b)) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += std::sqrt(std::max(0.0, a(i, i).real()) * std::max(0.0, b(i, i).real()));
    return s * s;
  }
  std::vector<int> idx = joint_support(a, b);
  if (idx.empty()) return 0.0;
  a = take(a, idx);
  b = take(b, idx);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(0.5 * (a + a.adjoint()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(0.5 * (b + b.adjoint()));
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    throw NumericalError("fidelity: eigendecomposition failed");
  }
  // Work in the numerical range of the lower-rank state; eigenvalues at rounding
  // level would otherwise add sqrt(eps)-sized noise.
  const double cut = 1e-14 * static_cast<double>(idx.size());
  auto rank = [&](const Eigen::VectorXd& ev) {
    double top = std::max(ev.maxCoeff(), 0.0);
    return static_cast<int>((ev.array() > cut * top).count());
  };
  const bool swap = rank(eb.eigenvalues()) < rank(ea.eigenvalues());
  const auto& es = swap ? eb : ea;
  const Eigen::MatrixXcd& other = swap ? a : b;
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut * top) keep.push_back(i);
  }
  if (keep.empty()) return 0.0;
  Eigen::MatrixXcd w(ev.size(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j) w.col(j) = es.eigenvectors().col(keep[j]) * std::sqrt(ev[keep[j]]);
  Eigen::MatrixXcd m = w.adjoint() * other * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (em.info() != Eigen::Success) throw NumericalError("fidelity: eigendecomposition failed");
  double s = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return s * s;
}

double fidelity(const PhotonState& a, const PhotonState& b) { return fidelity(a.rho(), b.rho()); }

std::vector<FidelityPoint> fidelity_profile(const PhotonState& input, const CouplingParams& c, int k_min, int k_max,
                                            Regime regime) {
  if (k_min > k_max) throw ValidationError("fidelity_profile: empty k range");
  std::vector<FidelityPoint> out;
  for (int k = k_min; k <= k_max; ++k) {
    FidelityPoint pt;
    pt.k = k;
    try {
      PostMeasurement pm = post_measurement_state(input, c, k, regime);
      pt.detection_probability = pm.detection_probability;
      pt.fidelity = fidelity(input.rho(), pm.state.rho());
    } catch (const UndefinedError&) {
      pt.detection_probability = 0.0;
      pt.fidelity = 0.0;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace qpinem
