#pragma once

#include <span>
#include <vector>

#include "owg/envelope.hpp"

namespace owg {

/// Acousto-optic interaction parameters. SI units throughout.
struct AcoustoOpticParams {
  double v = 650.0;             // acoustic velocity, m/s
  double f_acoustic = 100e6;    // Hz
  double wavelength = 405e-9;   // optical, m
  double w0 = 63e-6;            // beam waist at the crystal, m
  double n0 = 2.26;
  double eta = 1e-5;            // index modulation amplitude
  double theta0 = 0.0;          // Bragg angle, rad; 0 means derive from the Bragg condition
  double L1 = -3.0 * 63e-6;     // interaction region, m
  double L2 = 3.0 * 63e-6;
  double phi = 0.0;             // acoustic phase offset, rad
  int steps = 256;              // minimum trapezoid steps across [L1, L2]

  double q() const;             // acoustic wavenumber 2 pi f / v
  double bragg_angle() const;   // theta0, or asin(q lambda / (4 pi n0)) when unset
  double r0() const;            // q eta / (4 n0 sin^2 theta0)
  double transit_time() const { return (L2 - L1) / v; }

  /// Throws std::invalid_argument on v <= 0, w0 <= 0, L1 >= L2, steps < 64, eta >= n0.
  void validate() const;

  /// Divergence scale 2 pi / lambda * (lambda / (pi w0))^2, rad/m.
  double base_kappa() const;
};

/// Multiplier on base_kappa() giving a 0.25 rad phase peak for a 0.3 us FWHM Gaussian.
inline constexpr double kDefaultKappaScale = 156.875067943;

inline double default_kappa(const AcoustoOpticParams& params) {
  return kDefaultKappaScale * params.base_kappa();
}

/// Samples-per-dt refinement s of the delay-time quadrature: the smallest
/// integer for which a step of dt / s gives at least params.steps steps per transit.
int quadrature_subdivision(const TimeGrid& grid, const AcoustoOpticParams& params);

/// r(t) = -i r0 e^{i phi} * integral over [L1, L2] of w(z) P(t - z/v) e^{i kappa z^2 / w0} dz
/// with w(z) = exp(-z^2 / w0^2), by the composite trapezoid rule in tau = z / v.
/// P is taken between samples by a natural cubic spline and is zero outside the grid.
std::vector<Complex> reflectance_trace(const TimeGrid& grid, std::span<const double> p_env,
                                       const AcoustoOpticParams& params, double kappa);

/// Unwrapped arg(r) referenced to zero at argmax |r|. Samples with
/// |r| < 1e-6 max |r| hold the phase of the nearest valid sample.
/// Throws ZeroSignal on all-zero input.
std::vector<double> quadrature_phase(std::span<const Complex> r);

/// Largest |phase| over samples where |r| >= 10% of max |r|.
double peak_quadrature_phase(const TimeGrid& grid, std::span<const double> p_env,
                             const AcoustoOpticParams& params, double kappa);

/// Smallest multiplier m of base_kappa() for which peak_quadrature_phase hits
/// `target_rad`, found by a geometric scan then bisection to 1e-10 relative.
/// Throws NonConvergence if the target is not reached below `max_scale`.
double calibrate_kappa_scale(const TimeGrid& grid, std::span<const double> p_env,
                             const AcoustoOpticParams& params, double target_rad,
                             double max_scale = 1e4);

}  // namespace owg
