#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace owg {

using Complex = std::complex<double>;

/// Uniform time grid, t_k = t0 + k * dt for k in [0, n).
class TimeGrid {
public:
  /// Throws std::invalid_argument unless dt > 0 and n >= 2.
  TimeGrid(double t0, double dt, std::size_t n);

  /// Smallest grid starting at t0 with period dt whose last sample is >= t1.
  static TimeGrid spanning(double t0, double t1, double dt);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return n_; }
  double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
  double back() const noexcept { return time(n_ - 1); }
  double span() const noexcept { return dt_ * static_cast<double>(n_ - 1); }
  double sample_rate() const noexcept { return 1.0 / dt_; }

  /// Same sample count, period and origin (origin and period to 1e-9 relative).
  bool same_as(const TimeGrid& other) const noexcept;

  /// Same origin and period with `n` samples.
  TimeGrid resized(std::size_t n) const { return TimeGrid(t0_, dt_, n); }

private:
  double t0_;
  double dt_;
  std::size_t n_;
};

/// Sampled complex baseband envelope s_k = I_k + i Q_k on a uniform grid.
class ComplexEnvelope {
public:
  explicit ComplexEnvelope(TimeGrid grid);  // all zeros
  ComplexEnvelope(TimeGrid grid, std::vector<Complex> samples);

  static ComplexEnvelope from_polar(TimeGrid grid, std::span<const double> amplitude,
                                    std::span<const double> phase);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<Complex>& samples() const noexcept { return samples_; }
  Complex operator[](std::size_t k) const { return samples_[k]; }

  std::vector<double> amplitude() const;
  /// Principal-value phase in (-pi, pi].
  std::vector<double> phase() const;
  /// Continuous phase obtained by removing 2*pi jumps.
  std::vector<double> unwrapped_phase() const;

  double norm() const;
  double peak_amplitude() const;

private:
  TimeGrid grid_;
  std::vector<Complex> samples_;
};

std::pair<std::vector<double>, std::vector<double>> iq_split(const ComplexEnvelope& env);
ComplexEnvelope iq_join(std::span<const double> i, std::span<const double> q, const TimeGrid& grid);

/// Throws GridMismatch if the two grids differ.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what);

// Elementwise algebra on envelopes sharing a grid.
ComplexEnvelope operator+(const ComplexEnvelope& a, const ComplexEnvelope& b);
ComplexEnvelope operator-(const ComplexEnvelope& a, const ComplexEnvelope& b);
ComplexEnvelope operator*(Complex scale, const ComplexEnvelope& a);

/// Content delayed by `lag` samples (negative advances); vacated samples are zero.
ComplexEnvelope shift_samples(const ComplexEnvelope& env, long lag);

/// Copy onto `grid` (same dt); samples outside the source are zero.
ComplexEnvelope embed(const ComplexEnvelope& env, const TimeGrid& grid);

/// Linear interpolation onto an arbitrary grid; zero outside the source span.
ComplexEnvelope resample_linear(const ComplexEnvelope& env, const TimeGrid& grid);

/// Unwraps a phase sequence in place.
void unwrap(std::vector<double>& phase);

}  // namespace owg
