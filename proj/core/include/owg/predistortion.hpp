#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "owg/envelope.hpp"
#include "owg/volterra.hpp"

namespace owg {

/// Hermitian positive definite band matrix stored by lower diagonals:
/// lower(d)[i] = A(i, i - d) for d in [0, bandwidth].
class BandedHermitian {
public:
  BandedHermitian(std::size_t n, std::size_t bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return p_; }
  /// Entry (i, j) with i >= j and i - j <= bandwidth.
  Complex& lower(std::size_t i, std::size_t j) { return band_[index(i, j)]; }
  Complex lower(std::size_t i, std::size_t j) const { return band_[index(i, j)]; }
  Complex at(std::size_t i, std::size_t j) const;  // any entry, zero outside the band

  void add_to_diagonal(double value);
  Eigen::MatrixXcd to_dense() const;

  /// In-place band Cholesky A = L L^H followed by the two triangular solves.
  /// Throws SingularSystem if a pivot is not positive.
  std::vector<Complex> solve(std::span<const Complex> rhs) const;

private:
  std::size_t index(std::size_t i, std::size_t j) const { return i * (p_ + 1) + (i - j); }
  std::size_t n_;
  std::size_t p_;
  std::vector<Complex> band_;
};

/// d out / d in of the first-order model: J[n][m] = h1[n - m] for 0 <= n - m < M.
/// Lower-triangular banded Toeplitz, stored implicitly.
class ConvolutionJacobian {
public:
  ConvolutionJacobian(std::vector<Complex> taps, std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t memory() const noexcept { return taps_.size(); }
  Complex operator()(std::size_t row, std::size_t col) const;

  Eigen::MatrixXcd to_dense() const;
  std::vector<Complex> apply(std::span<const Complex> x) const;    // J x
  std::vector<Complex> adjoint(std::span<const Complex> y) const;  // J^H y
  /// J^H J + lambda I as a band of half-width M - 1.
  BandedHermitian normal_matrix(double lambda) const;

private:
  std::vector<Complex> taps_;
  std::size_t n_;
};

/// Jacobian of volterra_forward(model, .) at `input`. Throws std::invalid_argument
/// if the memory exceeds the input length.
ConvolutionJacobian jacobian(const VolterraModel& model, const ComplexEnvelope& input);

/// s_pred = s_in - (J^H J + lambda I)^{-1} grad, grad = -J^H (s_target - s_out).
/// Throws SingularSystem when the damped normal matrix is not positive definite.
ComplexEnvelope lm_step(const VolterraModel& model, const ComplexEnvelope& s_in, const ComplexEnvelope& s_target,
                        const ComplexEnvelope& s_out, double lambda_damp);

struct LMConfig {
  double lambda0 = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
  int max_iters = 50;
  double cost_tol = 1e-6;

  void validate() const;
};

struct OfflineResult {
  ComplexEnvelope s_pred;
  std::vector<double> costs;  // initial cost, then one entry per accepted step
  int iterations = 0;         // attempted steps, accepted or not
  bool converged = false;
};

/// Damped Gauss-Newton on C(s) = mse(fitted_output(model, s), target), starting
/// from `initial` (default: the target itself). Returns the best point found.
OfflineResult offline_iterate(const VolterraModel& model, const ComplexEnvelope& s_target, const LMConfig& config,
                              const std::optional<ComplexEnvelope>& initial = std::nullopt);

/// s_in + (s_target - s_out); with printed_sign, s_in - (s_target - s_out).
ComplexEnvelope tf_free_step(const ComplexEnvelope& s_in, const ComplexEnvelope& s_target,
                             const ComplexEnvelope& s_out, bool printed_sign = false);

}  // namespace owg
