#include "owg/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "owg/errors.hpp"

namespace owg {

Eigen::MatrixXcd build_design_matrix(const ComplexEnvelope& input, std::size_t memory) {
  const std::size_t n = input.size();
  if (memory < 1 || memory > n) throw std::invalid_argument("build_design_matrix: memory out of range");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(memory + 1));
  a.col(0).setOnes();
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t jmax = std::min(memory, r + 1);
    for (std::size_t j = 0; j < jmax; ++j) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j + 1)) = input[r - j];
    }
  }
  return a;
}

Eigen::VectorXcd pack(const VolterraModel& model) {
  Eigen::VectorXcd h(static_cast<Eigen::Index>(model.memory() + 1));
  h(0) = model.h0;
  for (std::size_t j = 0; j < model.memory(); ++j) h(static_cast<Eigen::Index>(j + 1)) = model.h1[j];
  return h;
}

VolterraModel unpack(const Eigen::VectorXcd& h) {
  if (h.size() < 2) throw std::invalid_argument("unpack: need h0 and at least one tap");
  VolterraModel m;
  m.h0 = h(0);
  m.h1.assign(h.data() + 1, h.data() + h.size());
  return m;
}

VolterraModel solve_ridge(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& target, double lambda,
                          const LsqrOptions& options) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("solve_ridge: lambda must be nonnegative");
  if (design.rows() != target.size()) throw std::invalid_argument("solve_ridge: row count differs from target");
  LsqrOptions opt = options;
  opt.damp = std::sqrt(lambda);
  const auto res = lsqr(design, target, opt);
  if (!res.converged) {
    throw NonConvergence("solve_ridge: LSQR stopped after " + std::to_string(res.iterations) + " iterations",
                         res.normal_residual_norm);
  }
  return unpack(res.x);
}

VolterraModel estimate_kernel(const ComplexEnvelope& input, const ComplexEnvelope& output, std::size_t memory,
                              double lambda, const LsqrOptions& options) {
  require_same_grid(input.grid(), output.grid(), "estimate_kernel");
  if (input.size() < memory + 1) throw std::invalid_argument("estimate_kernel: need at least M + 1 samples");
  const auto a = build_design_matrix(input, memory);
  const Eigen::Map<const Eigen::VectorXcd> b(output.samples().data(), static_cast<Eigen::Index>(output.size()));
  return solve_ridge(a, b, lambda, options);
}

CVResult cross_validate(const ComplexEnvelope& input, const ComplexEnvelope& output, std::size_t memory,
                        const CVConfig& cv, const LsqrOptions& options) {
  require_same_grid(input.grid(), output.grid(), "cross_validate");
  const std::size_t n = input.size();
  if (cv.lambda_grid.empty()) throw std::invalid_argument("cross_validate: empty lambda grid");
  if (cv.folds < 2 || cv.folds > n) throw std::invalid_argument("cross_validate: folds must be in [2, N]");
  const std::size_t smallest_train = n - (n + cv.folds - 1) / cv.folds;
  if (smallest_train < memory + 1) throw std::invalid_argument("cross_validate: folds leave too few training rows");

  const auto a = build_design_matrix(input, memory);
  const Eigen::Map<const Eigen::VectorXcd> b(output.samples().data(), static_cast<Eigen::Index>(n));

  std::vector<std::size_t> edges(cv.folds + 1);
  for (std::size_t f = 0; f <= cv.folds; ++f) edges[f] = f * n / cv.folds;

  CVResult result;
  for (const double lambda : cv.lambda_grid) {
    CVScore score;
    score.lambda = lambda;
    for (std::size_t f = 0; f < cv.folds; ++f) {
      const auto lo = static_cast<Eigen::Index>(edges[f]);
      const auto hi = static_cast<Eigen::Index>(edges[f + 1]);
      const Eigen::Index n_train = static_cast<Eigen::Index>(n) - (hi - lo);
      Eigen::MatrixXcd a_train(n_train, a.cols());
      Eigen::VectorXcd b_train(n_train);
      a_train << a.topRows(lo), a.bottomRows(static_cast<Eigen::Index>(n) - hi);
      b_train << b.head(lo), b.tail(static_cast<Eigen::Index>(n) - hi);
      const auto h = pack(solve_ridge(a_train, b_train, lambda, options));
      const Eigen::VectorXcd resid = a.middleRows(lo, hi - lo) * h - b.segment(lo, hi - lo);
      score.fold_mse.push_back(resid.squaredNorm() / static_cast<double>(hi - lo));
    }
    double sum = 0.0;
    for (const double m : score.fold_mse) sum += m;
    score.mean_mse = sum / static_cast<double>(cv.folds);
    result.scores.push_back(std::move(score));
  }
  const auto best = std::min_element(result.scores.begin(), result.scores.end(),
                                     [](const CVScore& x, const CVScore& y) { return x.mean_mse < y.mean_mse; });
  result.lambda_star = best->lambda;
  return result;
}

MetricReport model_error(const VolterraModel& model, const ComplexEnvelope& input, const ComplexEnvelope& output) {
  require_same_grid(input.grid(), output.grid(), "model_error");
  return evaluate(fitted_output(model, input), output);
}

}  // namespace owg
