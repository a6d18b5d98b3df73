#include "owg/aom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "owg/errors.hpp"

namespace owg {
namespace {

constexpr double kPi = std::numbers::pi;

// Natural cubic spline through uniformly spaced samples; zero outside the grid.
class UniformSpline {
public:
  UniformSpline(const TimeGrid& grid, std::span<const double> y)
      : t0_(grid.t0()), h_(grid.dt()), y_(y.begin(), y.end()), m_(y.size(), 0.0) {
    const std::size_t n = y_.size();
    if (n < 3) return;
    // Thomas algorithm on m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2.
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    const double s = 6.0 / (h_ * h_);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double rhs = s * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
      const double denom = 4.0 - c[i - 1];
      c[i] = 1.0 / denom;
      d[i] = (rhs - d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  double operator()(double t) const {
    const double u = (t - t0_) / h_;
    const double last = static_cast<double>(y_.size() - 1);
    if (u < -1e-9 || u > last + 1e-9) return 0.0;
    const double uc = std::clamp(u, 0.0, last);
    auto k = static_cast<std::size_t>(std::floor(uc));
    if (k >= y_.size() - 1) k = y_.size() - 2;
    const double b = uc - static_cast<double>(k);
    const double a = 1.0 - b;
    const double h2 = h_ * h_ / 6.0;
    return a * y_[k] + b * y_[k + 1] + h2 * ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]);
  }

private:
  double t0_;
  double h_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace

double AcoustoOpticParams::q() const { return 2.0 * kPi * f_acoustic / v; }

double AcoustoOpticParams::bragg_angle() const {
  if (theta0 != 0.0) return theta0;
  return std::asin(q() * wavelength / (4.0 * kPi * n0));
}

double AcoustoOpticParams::r0() const {
  const double s = std::sin(bragg_angle());
  return q() * eta / (4.0 * n0 * s * s);
}

void AcoustoOpticParams::validate() const {
  if (!(v > 0.0)) throw std::invalid_argument("AcoustoOpticParams: v must be positive");
  if (!(w0 > 0.0)) throw std::invalid_argument("AcoustoOpticParams: w0 must be positive");
  if (!(L1 < L2)) throw std::invalid_argument("AcoustoOpticParams: degenerate interaction region");
  if (steps < 64) throw std::invalid_argument("AcoustoOpticParams: at least 64 quadrature steps required");
  if (!(f_acoustic > 0.0) || !(wavelength > 0.0) || !(n0 > 0.0)) {
    throw std::invalid_argument("AcoustoOpticParams: frequency, wavelength and n0 must be positive");
  }
  if (!(eta >= 0.0) || !(eta < 0.1 * n0)) {
    throw std::invalid_argument("AcoustoOpticParams: eta must be small compared to n0");
  }
  const double s = q() * wavelength / (4.0 * kPi * n0);
  if (theta0 == 0.0 && !(s < 1.0)) throw std::invalid_argument("AcoustoOpticParams: no Bragg angle exists");
}

int quadrature_subdivision(const TimeGrid& grid, const AcoustoOpticParams& params) {
  const double per_step = params.transit_time() / params.steps;
  return std::max(1, static_cast<int>(std::ceil(grid.dt() / per_step - 1e-9)));
}

double AcoustoOpticParams::base_kappa() const {
  const double div = wavelength / (kPi * w0);
  return 2.0 * kPi / wavelength * div * div;
}

std::vector<Complex> reflectance_trace(const TimeGrid& grid, std::span<const double> p_env,
                                       const AcoustoOpticParams& params, double kappa) {
  params.validate();
  if (p_env.size() != grid.size()) throw std::invalid_argument("reflectance_trace: envelope length differs from grid");
  if (std::any_of(p_env.begin(), p_env.end(), [](double p) { return !(p >= 0.0); })) {
    throw std::invalid_argument("reflectance_trace: P must be real and nonnegative");
  }

  // Nodes in delay time tau = z / v sit on multiples of dt / s so that interior
  // nodes coincide with spline knots; the two ends are the exact region bounds.
  const double a = params.L1 / params.v;
  const double b = params.L2 / params.v;
  const int s = quadrature_subdivision(grid, params);
  const double h = grid.dt() / s;
  std::vector<double> tau{a};
  for (auto j = static_cast<long>(std::floor(a / h)) + 1; j * h < b; ++j) {
    if (j * h - a > 1e-9 * h) tau.push_back(j * h);
  }
  if (b - tau.back() > 1e-9 * h) tau.push_back(b); else tau.back() = b;

  std::vector<Complex> kernel(tau.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double half = 0.5 * (tau[i + 1] - tau[i]);
    kernel[i] += half;
    kernel[i + 1] += half;
  }
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double z = params.v * tau[i];
    kernel[i] *= params.v * std::exp(-z * z / (params.w0 * params.w0)) *
                 std::polar(1.0, kappa * z * z / params.w0);
  }
  const Complex front = Complex{0.0, -1.0} * params.r0() * std::polar(1.0, params.phi);

  const UniformSpline p(grid, p_env);
  std::vector<Complex> r(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.time(k);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < tau.size(); ++i) acc += kernel[i] * p(t - tau[i]);
    r[k] = front * acc;
  }
  return r;
}

std::vector<double> quadrature_phase(std::span<const Complex> r) {
  const std::size_t n = r.size();
  double peak = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(r[k]);
    if (a > peak) {
      peak = a;
      at = k;
    }
  }
  if (peak == 0.0) throw ZeroSignal("quadrature_phase: all-zero input");
  const double floor = 1e-6 * peak;

  std::vector<std::size_t> valid;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(r[k]) >= floor) valid.push_back(k);
  }
  std::vector<double> ph(valid.size());
  for (std::size_t m = 0; m < valid.size(); ++m) ph[m] = std::arg(r[valid[m]]);
  unwrap(ph);

  std::vector<double> out(n, 0.0);
  // Fill from valid samples, invalid ones take the nearest valid neighbour.
  std::size_t m = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (m + 1 < valid.size() && valid[m + 1] <= k) ++m;
    std::size_t pick = m;
    if (valid[m] < k && m + 1 < valid.size() && valid[m + 1] - k < k - valid[m]) pick = m + 1;
    out[k] = ph[pick];
  }
  const double ref = out[at];
  for (auto& v : out) v -= ref;
  return out;
}

double peak_quadrature_phase(const TimeGrid& grid, std::span<const double> p_env,
                             const AcoustoOpticParams& params, double kappa) {
  const auto r = reflectance_trace(grid, p_env, params, kappa);
  const auto ph = quadrature_phase(r);
  double rmax = 0.0;
  for (const auto& v : r) rmax = std::max(rmax, std::abs(v));
  double peak = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (std::abs(r[k]) >= 0.1 * rmax) peak = std::max(peak, std::abs(ph[k]));
  }
  return peak;
}

double calibrate_kappa_scale(const TimeGrid& grid, std::span<const double> p_env,
                             const AcoustoOpticParams& params, double target_rad, double max_scale) {
  if (!(target_rad > 0.0)) throw std::invalid_argument("calibrate_kappa_scale: target must be positive");
  const double base = params.base_kappa();
  auto peak_at = [&](double m) { return peak_quadrature_phase(grid, p_env, params, m * base); };

  double lo = 0.0;
  double hi = 1e-3;
  double f_hi = peak_at(hi);
  while (f_hi < target_rad) {
    lo = hi;
    hi *= 1.25;
    if (hi > max_scale) throw NonConvergence("calibrate_kappa_scale: target phase not reached", f_hi);
    f_hi = peak_at(hi);
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (peak_at(mid) < target_rad) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace owg
