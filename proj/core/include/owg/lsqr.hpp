#pragma once

#include <functional>

#include <Eigen/Dense>

namespace owg {

struct LsqrOptions {
  double damp = 0.0;  // minimizes |A x - b|^2 + damp^2 |x|^2
  double atol = 1e-12;
  double btol = 1e-12;
  int max_iters = 0;  // 0: 100 * cols + 1000
};

struct LsqrResult {
  Eigen::VectorXcd x;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;         // estimate of sqrt(|r|^2 + damp^2 |x|^2)
  double normal_residual_norm = 0.0;  // estimate of |A^H r - damp^2 x|
};

/// Paige-Saunders LSQR on a complex dense matrix. Starts from x = 0, so
/// rank-deficient problems return the minimum-norm solution.
LsqrResult lsqr(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, const LsqrOptions& options = {});

}  // namespace owg
