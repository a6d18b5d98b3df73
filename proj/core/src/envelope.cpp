#include "owg/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "owg/errors.hpp"

namespace owg {

TimeGrid::TimeGrid(double t0, double dt, std::size_t n) : t0_(t0), dt_(dt), n_(n) {
  if (!std::isfinite(t0) || !std::isfinite(dt) || !(dt > 0.0)) {
    throw std::invalid_argument("TimeGrid: dt must be finite and positive");
  }
  if (n < 2) {
    throw std::invalid_argument("TimeGrid: need at least two samples");
  }
}

TimeGrid TimeGrid::spanning(double t0, double t1, double dt) {
  if (!(t1 > t0)) {
    throw std::invalid_argument("TimeGrid::spanning: empty interval");
  }
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9)) + 1;
  return TimeGrid(t0, dt, n);
}

bool TimeGrid::same_as(const TimeGrid& other) const noexcept {
  if (n_ != other.n_) return false;
  if (std::abs(dt_ - other.dt_) > 1e-9 * dt_) return false;
  return std::abs(t0_ - other.t0_) <= 1e-9 * dt_ * static_cast<double>(n_);
}

ComplexEnvelope::ComplexEnvelope(TimeGrid grid)
    : grid_(grid), samples_(grid.size(), Complex{0.0, 0.0}) {}

ComplexEnvelope::ComplexEnvelope(TimeGrid grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw std::invalid_argument("ComplexEnvelope: " + std::to_string(samples_.size()) +
                                " samples for a grid of " + std::to_string(grid_.size()));
  }
}

ComplexEnvelope ComplexEnvelope::from_polar(TimeGrid grid, std::span<const double> amplitude,
                                            std::span<const double> phase) {
  if (amplitude.size() != phase.size()) {
    throw std::invalid_argument("from_polar: amplitude and phase lengths differ");
  }
  std::vector<Complex> s(amplitude.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = std::polar(amplitude[k], phase[k]);
  }
  return ComplexEnvelope(grid, std::move(s));
}

std::vector<double> ComplexEnvelope::amplitude() const {
  std::vector<double> a(samples_.size());
  std::transform(samples_.begin(), samples_.end(), a.begin(),
                 [](Complex s) { return std::abs(s); });
  return a;
}

std::vector<double> ComplexEnvelope::phase() const {
  std::vector<double> p(samples_.size());
  std::transform(samples_.begin(), samples_.end(), p.begin(), [](Complex s) {
    const double a = std::arg(s);
    // std::arg returns [-pi, pi]; fold -pi onto pi.
    return a == -std::numbers::pi ? std::numbers::pi : a;
  });
  return p;
}

std::vector<double> ComplexEnvelope::unwrapped_phase() const {
  auto p = phase();
  unwrap(p);
  return p;
}

double ComplexEnvelope::norm() const {
  double acc = 0.0;
  for (const auto& s : samples_) acc += std::norm(s);
  return std::sqrt(acc);
}

double ComplexEnvelope::peak_amplitude() const {
  double peak = 0.0;
  for (const auto& s : samples_) peak = std::max(peak, std::abs(s));
  return peak;
}

std::pair<std::vector<double>, std::vector<double>> iq_split(const ComplexEnvelope& env) {
  std::vector<double> i(env.size());
  std::vector<double> q(env.size());
  for (std::size_t k = 0; k < env.size(); ++k) {
    i[k] = env[k].real();
    q[k] = env[k].imag();
  }
  return {std::move(i), std::move(q)};
}

ComplexEnvelope iq_join(std::span<const double> i, std::span<const double> q, const TimeGrid& grid) {
  if (i.size() != q.size()) {
    throw std::invalid_argument("iq_join: I and Q lengths differ");
  }
  std::vector<Complex> s(i.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = Complex{i[k], q[k]};
  return ComplexEnvelope(grid, std::move(s));
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!a.same_as(b)) {
    throw GridMismatch(std::string(what) + ": envelopes are on different grids");
  }
}

ComplexEnvelope operator+(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a.grid(), b.grid(), "operator+");
  std::vector<Complex> s(a.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = a[k] + b[k];
  return ComplexEnvelope(a.grid(), std::move(s));
}

ComplexEnvelope operator-(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a.grid(), b.grid(), "operator-");
  std::vector<Complex> s(a.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = a[k] - b[k];
  return ComplexEnvelope(a.grid(), std::move(s));
}

ComplexEnvelope operator*(Complex scale, const ComplexEnvelope& a) {
  std::vector<Complex> s(a.samples());
  for (auto& v : s) v *= scale;
  return ComplexEnvelope(a.grid(), std::move(s));
}

ComplexEnvelope shift_samples(const ComplexEnvelope& env, long lag) {
  const auto n = static_cast<long>(env.size());
  std::vector<Complex> s(env.size(), Complex{0.0, 0.0});
  for (long k = 0; k < n; ++k) {
    const long src = k - lag;
    if (src >= 0 && src < n) s[static_cast<std::size_t>(k)] = env[static_cast<std::size_t>(src)];
  }
  return ComplexEnvelope(env.grid(), std::move(s));
}

ComplexEnvelope embed(const ComplexEnvelope& env, const TimeGrid& grid) {
  if (std::abs(env.grid().dt() - grid.dt()) > 1e-9 * grid.dt()) {
    throw GridMismatch("embed: sample periods differ");
  }
  const long offset = std::lround((grid.t0() - env.grid().t0()) / grid.dt());
  const auto n_src = static_cast<long>(env.size());
  std::vector<Complex> s(grid.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < s.size(); ++k) {
    const long src = static_cast<long>(k) + offset;
    if (src >= 0 && src < n_src) s[k] = env[static_cast<std::size_t>(src)];
  }
  return ComplexEnvelope(grid, std::move(s));
}

ComplexEnvelope resample_linear(const ComplexEnvelope& env, const TimeGrid& grid) {
  const auto& src = env.grid();
  const double last = static_cast<double>(src.size() - 1);
  std::vector<Complex> s(grid.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < s.size(); ++k) {
    double x = (grid.time(k) - src.t0()) / src.dt();
    // Snap positions within rounding of a source node onto it.
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-9) x = nearest;
    if (x < 0.0 || x > last) continue;
    const auto j = static_cast<std::size_t>(std::floor(x));
    const double frac = x - static_cast<double>(j);
    if (j + 1 >= src.size() || frac == 0.0) {
      s[k] = env[j];
    } else {
      s[k] = (1.0 - frac) * env[j] + frac * env[j + 1];
    }
  }
  return ComplexEnvelope(grid, std::move(s));
}

void unwrap(std::vector<double>& phase) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (phase.empty()) return;
  double offset = 0.0;
  double prev_raw = phase[0];
  for (std::size_t k = 1; k < phase.size(); ++k) {
    const double raw = phase[k];
    offset -= two_pi * std::round((raw - prev_raw) / two_pi);
    phase[k] = raw + offset;
    prev_raw = raw;
  }
}

}  // namespace owg
