#include "owg/predistortion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owg/errors.hpp"
#include "owg/metrics.hpp"

namespace owg {

BandedHermitian::BandedHermitian(std::size_t n, std::size_t bandwidth)
    : n_(n), p_(std::min(bandwidth, n == 0 ? 0 : n - 1)), band_(n * (p_ + 1), Complex{0.0, 0.0}) {}

Complex BandedHermitian::at(std::size_t i, std::size_t j) const {
  if (i >= j) return i - j <= p_ ? lower(i, j) : Complex{0.0, 0.0};
  return j - i <= p_ ? std::conj(lower(j, i)) : Complex{0.0, 0.0};
}

void BandedHermitian::add_to_diagonal(double value) {
  for (std::size_t i = 0; i < n_; ++i) lower(i, i) += value;
}

Eigen::MatrixXcd BandedHermitian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd a(n, n);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = at(i, j);
  }
  return a;
}

std::vector<Complex> BandedHermitian::solve(std::span<const Complex> rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("BandedHermitian::solve: size mismatch");
  BandedHermitian l(*this);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n_; ++i) max_diag = std::max(max_diag, lower(i, i).real());
  const double pivot_floor = 1e-14 * max_diag;

  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t k0 = j > p_ ? j - p_ : 0;
    double d = l.lower(j, j).real();
    for (std::size_t k = k0; k < j; ++k) d -= std::norm(l.lower(j, k));
    if (!(d > pivot_floor)) throw SingularSystem("BandedHermitian::solve: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l.lower(j, j) = ljj;
    const std::size_t imax = std::min(n_ - 1, j + p_);
    for (std::size_t i = j + 1; i <= imax; ++i) {
      Complex s = l.lower(i, j);
      const std::size_t kk = std::max(k0, i > p_ ? i - p_ : 0);
      for (std::size_t k = kk; k < j; ++k) s -= l.lower(i, k) * std::conj(l.lower(j, k));
      l.lower(i, j) = s / ljj;
    }
  }

  std::vector<Complex> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t k0 = i > p_ ? i - p_ : 0;
    Complex s = y[i];
    for (std::size_t k = k0; k < i; ++k) s -= l.lower(i, k) * y[k];
    y[i] = s / l.lower(i, i).real();
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    const std::size_t kmax = std::min(n_ - 1, ii + p_);
    Complex s = y[ii];
    for (std::size_t k = ii + 1; k <= kmax; ++k) s -= std::conj(l.lower(k, ii)) * y[k];
    y[ii] = s / l.lower(ii, ii).real();
  }
  return y;
}

ConvolutionJacobian::ConvolutionJacobian(std::vector<Complex> taps, std::size_t n) : taps_(std::move(taps)), n_(n) {
  if (taps_.empty()) throw std::invalid_argument("ConvolutionJacobian: no taps");
  if (taps_.size() > n_) throw std::invalid_argument("ConvolutionJacobian: memory exceeds signal length");
}

Complex ConvolutionJacobian::operator()(std::size_t row, std::size_t col) const {
  if (row < col || row - col >= taps_.size()) return Complex{0.0, 0.0};
  return taps_[row - col];
}

Eigen::MatrixXcd ConvolutionJacobian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t c = 0; c < n_; ++c) {
    for (std::size_t d = 0; d < taps_.size() && c + d < n_; ++d) {
      j(static_cast<Eigen::Index>(c + d), static_cast<Eigen::Index>(c)) = taps_[d];
    }
  }
  return j;
}

std::vector<Complex> ConvolutionJacobian::apply(std::span<const Complex> x) const {
  if (x.size() != n_) throw std::invalid_argument("ConvolutionJacobian::apply: size mismatch");
  std::vector<Complex> y(n_, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t dmax = std::min(taps_.size(), r + 1);
    for (std::size_t d = 0; d < dmax; ++d) y[r] += taps_[d] * x[r - d];
  }
  return y;
}

std::vector<Complex> ConvolutionJacobian::adjoint(std::span<const Complex> y) const {
  if (y.size() != n_) throw std::invalid_argument("ConvolutionJacobian::adjoint: size mismatch");
  std::vector<Complex> x(n_, Complex{0.0, 0.0});
  for (std::size_t c = 0; c < n_; ++c) {
    for (std::size_t d = 0; d < taps_.size() && c + d < n_; ++d) x[c] += std::conj(taps_[d]) * y[c + d];
  }
  return x;
}

BandedHermitian ConvolutionJacobian::normal_matrix(double lambda) const {
  const std::size_t m = taps_.size();
  BandedHermitian a(n_, m - 1);
  // (J^H J)(r, c) = sum_j conj(h_j) h_{j + d} over j <= min(M - 1 - d, N - 1 - r), d = r - c.
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t dmax = std::min(m - 1, r);
    for (std::size_t d = 0; d <= dmax; ++d) {
      const std::size_t jmax = std::min(m - 1 - d, n_ - 1 - r);
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j <= jmax; ++j) s += std::conj(taps_[j]) * taps_[j + d];
      a.lower(r, r - d) = s;
    }
  }
  a.add_to_diagonal(lambda);
  return a;
}

ConvolutionJacobian jacobian(const VolterraModel& model, const ComplexEnvelope& input) {
  model.validate();
  if (model.memory() > input.size()) throw std::invalid_argument("jacobian: memory exceeds signal length");
  return ConvolutionJacobian(model.h1, input.size());
}

ComplexEnvelope lm_step(const VolterraModel& model, const ComplexEnvelope& s_in, const ComplexEnvelope& s_target,
                        const ComplexEnvelope& s_out, double lambda_damp) {
  require_same_grid(s_in.grid(), s_target.grid(), "lm_step");
  require_same_grid(s_in.grid(), s_out.grid(), "lm_step");
  if (!(lambda_damp >= 0.0)) throw std::invalid_argument("lm_step: damping must be nonnegative");
  const auto j = jacobian(model, s_in);
  const auto err = s_target - s_out;
  auto grad = j.adjoint(err.samples());
  for (auto& g : grad) g = -g;
  const auto delta = j.normal_matrix(lambda_damp).solve(grad);
  std::vector<Complex> pred(s_in.samples());
  for (std::size_t k = 0; k < pred.size(); ++k) pred[k] -= delta[k];
  return ComplexEnvelope(s_in.grid(), std::move(pred));
}

void LMConfig::validate() const {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("LMConfig: lambda0 must be positive");
  if (!(lambda_up > 1.0)) throw std::invalid_argument("LMConfig: lambda_up must exceed 1");
  if (!(lambda_down > 0.0 && lambda_down < 1.0)) throw std::invalid_argument("LMConfig: lambda_down must be in (0, 1)");
  if (max_iters < 1) throw std::invalid_argument("LMConfig: max_iters must be positive");
  if (!(cost_tol > 0.0)) throw std::invalid_argument("LMConfig: cost_tol must be positive");
}

OfflineResult offline_iterate(const VolterraModel& model, const ComplexEnvelope& s_target, const LMConfig& config,
                              const std::optional<ComplexEnvelope>& initial) {
  config.validate();
  ComplexEnvelope s = initial.value_or(s_target);
  require_same_grid(s.grid(), s_target.grid(), "offline_iterate");
  auto out = fitted_output(model, s);
  double cost = mse_cost(out, s_target);
  OfflineResult result{s, {cost}, 0, false};

  double lambda = config.lambda0;
  while (cost >= config.cost_tol && result.iterations < config.max_iters) {
    ++result.iterations;
    std::optional<ComplexEnvelope> candidate;
    try {
      candidate = lm_step(model, s, s_target, out, lambda);
    } catch (const SingularSystem&) {
      lambda *= config.lambda_up;
      continue;
    }
    auto cand_out = fitted_output(model, *candidate);
    const double cand_cost = mse_cost(cand_out, s_target);
    if (cand_cost < cost) {
      s = std::move(*candidate);
      out = std::move(cand_out);
      cost = cand_cost;
      result.costs.push_back(cost);
      lambda *= config.lambda_down;
    } else {
      lambda *= config.lambda_up;
    }
  }
  result.s_pred = s;
  result.converged = cost < config.cost_tol;
  return result;
}

ComplexEnvelope tf_free_step(const ComplexEnvelope& s_in, const ComplexEnvelope& s_target,
                             const ComplexEnvelope& s_out, bool printed_sign) {
  require_same_grid(s_in.grid(), s_target.grid(), "tf_free_step");
  require_same_grid(s_in.grid(), s_out.grid(), "tf_free_step");
  const auto err = s_target - s_out;
  return printed_sign ? s_in - err : s_in + err;
}

}  // namespace owg
