#pragma once

#include <Eigen/Dense>

namespace qpinem {

struct NnlsResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
};

// Lawson-Hanson active set for min 1/2 x'Hx - f'x subject to x >= 0, with H
// symmetric positive definite. The Cholesky factor of the passive block is
// updated in place as columns enter and leave.
NnlsResult nnls_normal_equations(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, int max_iterations = -1);

}  // namespace qpinem
