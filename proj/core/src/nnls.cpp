#include "qpinem/nnls.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qpinem/errors.hpp"

namespace qpinem {

namespace {

// Lower-triangular factor of H restricted to an ordered index set.
class PassiveCholesky {
 public:
  explicit PassiveCholesky(const Eigen::MatrixXd& H) : H_(H), L_(H.rows(), H.rows()) {}

  int size() const { return static_cast<int>(idx_.size()); }
  const std::vector<int>& indices() const { return idx_; }

  // Returns false when j is numerically dependent on the current set.
  bool add(int j) {
    const int p = size();
    Eigen::VectorXd h(p);
    for (int i = 0; i < p; ++i) h[i] = H_(idx_[i], j);
    Eigen::VectorXd l = h;
    if (p > 0) L_.topLeftCorner(p, p).triangularView<Eigen::Lower>().solveInPlace(l);
    double d2 = H_(j, j) - l.squaredNorm();
    if (!(d2 > 1e-14 * H_(j, j))) return false;
    L_.row(p).head(p) = l.transpose();
    L_(p, p) = std::sqrt(d2);
    idx_.push_back(j);
    return true;
  }

  void remove_at(int r) {
    const int p = size();
    // Drop row r; the trailing block absorbs column r by a rank-1 update.
    Eigen::VectorXd v = L_.col(r).segment(r + 1, p - r - 1);
    for (int i = r + 1; i < p; ++i) L_.row(i - 1).head(r) = L_.row(i).head(r);
    for (int i = r + 1; i < p; ++i) {
      for (int c = r + 1; c <= i; ++c) L_(i - 1, c - 1) = L_(i, c);
    }
    const int m = p - r - 1;
    for (int k = 0; k < m; ++k) {
      int kk = r + k;
      double lkk = L_(kk, kk);
      double rr = std::hypot(lkk, v[k]);
      double c = rr / lkk, s = v[k] / lkk;
      L_(kk, kk) = rr;
      for (int i = k + 1; i < m; ++i) {
        int ii = r + i;
        L_(ii, kk) = (L_(ii, kk) + s * v[i]) / c;
        v[i] = c * v[i] - s * L_(ii, kk);
      }
    }
    idx_.erase(idx_.begin() + r);
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& f) const {
    const int p = size();
    Eigen::VectorXd z(p);
    for (int i = 0; i < p; ++i) z[i] = f[idx_[i]];
    L_.topLeftCorner(p, p).triangularView<Eigen::Lower>().solveInPlace(z);
    L_.topLeftCorner(p, p).transpose().triangularView<Eigen::Upper>().solveInPlace(z);
    return z;
  }

 private:
  const Eigen::MatrixXd& H_;
  Eigen::MatrixXd L_;
  std::vector<int> idx_;
};

}  // namespace

NnlsResult nnls_normal_equations(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, int max_iterations) {
  const int n = static_cast<int>(H.rows());
  if (H.cols() != n || f.size() != n) throw ValidationError("nnls: dimension mismatch");
  if (max_iterations < 0) max_iterations = 3 * n + 30;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = H.cwiseAbs().rowwise().sum().maxCoeff();

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(n, 0), blocked(n, 0);
  PassiveCholesky chol(H);
  Eigen::VectorXd w = f;

  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it + 1;
    double tol = 10.0 * eps * n * (hnorm * res.x.cwiseAbs().maxCoeff() + f.cwiseAbs().maxCoeff());
    int j = -1;
    double best = tol;
    for (int i = 0; i < n; ++i) {
      if (!passive[i] && !blocked[i] && w[i] > best) {
        best = w[i];
        j = i;
      }
    }
    if (j < 0) {
      res.converged = true;
      return res;
    }
    if (!chol.add(j)) {
      blocked[j] = 1;
      continue;
    }
    passive[j] = 1;

    for (int inner = 0;; ++inner) {
      Eigen::VectorXd z = chol.solve(f);
      const auto& idx = chol.indices();
      bool feasible = true;
      for (int i = 0; i < chol.size(); ++i) {
        if (z[i] <= 0.0) feasible = false;
      }
      if (feasible) {
        for (int i = 0; i < chol.size(); ++i) res.x[idx[i]] = z[i];
        break;
      }
      if (inner == 0 && chol.size() > 0 && idx.back() == j && z[chol.size() - 1] <= 0.0) {
        // The entering variable cannot move; its positive gradient was rounding noise.
        chol.remove_at(chol.size() - 1);
        passive[j] = 0;
        blocked[j] = 1;
        break;
      }
      double alpha = 1.0;
      int hit = -1;
      for (int i = 0; i < chol.size(); ++i) {
        if (z[i] <= 0.0) {
          double xi = res.x[idx[i]];
          double a = xi / (xi - z[i]);
          if (a < alpha || hit < 0) {
            alpha = std::min(alpha, a);
            hit = idx[i];
          }
        }
      }
      for (int i = 0; i < chol.size(); ++i) res.x[idx[i]] += alpha * (z[i] - res.x[idx[i]]);
      if (hit >= 0) res.x[hit] = 0.0;
      for (int i = chol.size() - 1; i >= 0; --i) {
        int v = chol.indices()[i];
        if (res.x[v] <= 10.0 * eps * res.x.cwiseAbs().maxCoeff()) {
          res.x[v] = 0.0;
          passive[v] = 0;
          chol.remove_at(i);
        }
      }
      if (chol.size() == 0) break;
    }
    w = f - H * res.x;
    // A variable blocked by rounding gets another chance once the passive set changes.
    std::fill(blocked.begin(), blocked.end(), 0);
    if (!passive[j]) blocked[j] = 1;
  }
  return res;
}

}  // namespace qpinem
