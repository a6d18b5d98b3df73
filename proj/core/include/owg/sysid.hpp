#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "owg/envelope.hpp"
#include "owg/lsqr.hpp"
#include "owg/metrics.hpp"
#include "owg/volterra.hpp"

namespace owg {

/// Row n = [1, in_n, in_{n-1}, ..., in_{n-M+1}], zero for negative indices.
/// Throws std::invalid_argument unless 1 <= M <= input length.
Eigen::MatrixXcd build_design_matrix(const ComplexEnvelope& input, std::size_t memory);

/// [h0; h1] as a column vector, and back.
Eigen::VectorXcd pack(const VolterraModel& model);
VolterraModel unpack(const Eigen::VectorXcd& coefficients);

/// Ridge least squares argmin |A h - b|^2 + lambda |h|^2 by LSQR.
/// Throws NonConvergence (with the residual) if LSQR hits its iteration cap.
VolterraModel solve_ridge(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& target, double lambda,
                          const LsqrOptions& options = {});

/// Fits out ~ h0 + h1 * in on equal grids. Requires N >= M + 1.
VolterraModel estimate_kernel(const ComplexEnvelope& input, const ComplexEnvelope& output, std::size_t memory,
                              double lambda, const LsqrOptions& options = {});

struct CVConfig {
  std::size_t folds = 5;
  std::vector<double> lambda_grid{0.0, 1e-6, 1e-4, 1e-2, 1.0};
};

struct CVScore {
  double lambda = 0.0;
  double mean_mse = 0.0;
  std::vector<double> fold_mse;
};

struct CVResult {
  double lambda_star = 0.0;
  std::vector<CVScore> scores;  // in grid order
};

/// Contiguous-block K-fold cross-validation over the lambda grid, scored by
/// validation MSE. Ties resolve to the earliest grid entry.
CVResult cross_validate(const ComplexEnvelope& input, const ComplexEnvelope& output, std::size_t memory,
                        const CVConfig& cv, const LsqrOptions& options = {});

/// MASE and MSE between fitted_output(model, input) and output.
MetricReport model_error(const VolterraModel& model, const ComplexEnvelope& input, const ComplexEnvelope& output);

}  // namespace owg
