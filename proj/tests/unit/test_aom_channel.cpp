#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "owg/aom.hpp"
#include "owg/channel.hpp"
#include "owg/errors.hpp"
#include "owg/pulse.hpp"

namespace owg {
namespace {

ComplexEnvelope gaussian(double fwhm, double margin = 300e-9) {
  PulseSpec spec;
  spec.kind = PulseKind::kGaussian;
  spec.duration = 3.0 * fwhm;
  spec.fwhm = fwhm;
  return make_pulse(spec, working_grid(spec.duration, margin));
}

TEST(AcoustoOptic, DerivedQuantities) {
  const AcoustoOpticParams p;
  EXPECT_NEAR(p.q(), 2.0 * std::numbers::pi * 100e6 / 650.0, 1e-9);
  EXPECT_NEAR(std::sin(p.bragg_angle()), p.q() * 405e-9 / (4.0 * std::numbers::pi * 2.26), 1e-15);
  const double s = std::sin(p.bragg_angle());
  EXPECT_NEAR(p.r0(), p.q() * 1e-5 / (4.0 * 2.26 * s * s), 1e-12 * p.r0());
  EXPECT_NEAR(p.transit_time(), 6.0 * 63e-6 / 650.0, 1e-18);
}

TEST(AcoustoOptic, ValidateRejectsBadParameters) {
  AcoustoOpticParams p;
  p.v = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.L1 = p.L2;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.steps = 10;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(AcoustoOptic, ConstantAmplitudeGivesNoPhaseVariationAwayFromEdges) {
  const TimeGrid g(0.0, 1e-9, 3000);
  const std::vector<double> p(g.size(), 1.0);
  const AcoustoOpticParams params;
  const auto r = reflectance_trace(g, p, params, default_kappa(params));
  const auto ph = quadrature_phase(r);
  const auto edge = static_cast<std::size_t>(std::ceil(params.transit_time() / g.dt())) + 2;
  const double mid = ph[g.size() / 2];
  for (std::size_t k = edge; k + edge < g.size(); ++k) EXPECT_NEAR(ph[k], mid, 1e-9);
}

TEST(AcoustoOptic, CalibratedPeakPhaseOnReferenceGaussian) {
  const auto env = gaussian(0.3e-6);
  const AcoustoOpticParams params;
  const double peak = peak_quadrature_phase(env.grid(), env.amplitude(), params, default_kappa(params));
  EXPECT_NEAR(peak, 0.25, 1e-6);
}

TEST(AcoustoOptic, PhaseIsSingleSignedAndZeroAtEnvelopePeak) {
  const auto env = gaussian(0.3e-6);
  const AcoustoOpticParams params;
  const auto r = reflectance_trace(env.grid(), env.amplitude(), params, default_kappa(params));
  const auto ph = quadrature_phase(r);
  double rmax = 0.0;
  std::size_t kmax = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (std::abs(r[k]) > rmax) {
      rmax = std::abs(r[k]);
      kmax = k;
    }
  }
  EXPECT_EQ(ph[kmax], 0.0);
  int sign = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (std::abs(r[k]) < 0.1 * rmax || std::abs(ph[k]) < 1e-12) continue;
    const int s = ph[k] > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    EXPECT_EQ(s, sign) << k;
  }
}

TEST(AcoustoOptic, QuadratureIsConverged) {
  const auto env = gaussian(0.3e-6);
  AcoustoOpticParams coarse;
  AcoustoOpticParams fine;
  fine.steps = 4 * coarse.steps;
  const double kappa = default_kappa(coarse);
  const auto a = reflectance_trace(env.grid(), env.amplitude(), coarse, kappa);
  const auto b = reflectance_trace(env.grid(), env.amplitude(), fine, kappa);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(b[k]));
  }
  EXPECT_LT(num / den, 1e-6);
}

TEST(AcoustoOptic, QuadraturePhaseOfZeroThrows) {
  const std::vector<Complex> z(10, 0.0);
  EXPECT_THROW(quadrature_phase(z), ZeroSignal);
}

TEST(AcoustoOptic, KappaCalibrationReproducesFrozenScale) {
  const auto env = gaussian(0.3e-6);
  const double scale = calibrate_kappa_scale(env.grid(), env.amplitude(), AcoustoOpticParams{}, 0.25);
  EXPECT_NEAR(scale, kDefaultKappaScale, 1e-6 * kDefaultKappaScale);
}

TEST(Channel, IdentityIsExact) {
  const auto env = gaussian(100e-9);
  const auto out = apply_channel(env, ChannelConfig::identity());
  EXPECT_EQ(out.samples(), env.samples());
}

TEST(Channel, DelayShiftsByWholeSamples) {
  const auto env = gaussian(100e-9);
  auto c = ChannelConfig::identity();
  c.delay = 12.4e-9;
  EXPECT_EQ(delay_samples(c.delay, 1e-9), 12);
  const auto out = apply_channel(env, c);
  EXPECT_EQ(out.samples(), shift_samples(env, 12).samples());
}

TEST(Channel, KernelOnlyMatchesConvolution) {
  const auto env = gaussian(100e-9);
  auto c = ChannelConfig::identity();
  c.volterra = default_distortion_kernel();
  EXPECT_EQ(apply_channel(env, c).samples(), volterra_forward(c.volterra, env).samples());
}

TEST(Channel, QuadratureDistortionKeepsAmplitude) {
  const auto env = gaussian(300e-9);
  const AcoustoOpticParams p;
  const auto out = apply_quadrature_distortion(env, p, default_kappa(p));
  for (std::size_t k = 0; k < env.size(); ++k) EXPECT_NEAR(std::abs(out[k]), std::abs(env[k]), 1e-14);
}

TEST(Channel, NoisePowerAndDeterminism) {
  const ComplexEnvelope zero(TimeGrid(0.0, 1e-9, 40000));
  auto c = ChannelConfig::identity();
  c.noise_sigma = 0.05;
  c.seed = 9;
  const auto a = apply_channel(zero, c);
  const auto b = apply_channel(zero, c);
  EXPECT_EQ(a.samples(), b.samples());
  double re2 = 0.0;
  double im2 = 0.0;
  for (const auto& v : a.samples()) {
    re2 += v.real() * v.real();
    im2 += v.imag() * v.imag();
  }
  const double n = static_cast<double>(a.size());
  EXPECT_NEAR((re2 + im2) / n, 0.05 * 0.05, 0.03 * 0.05 * 0.05);
  EXPECT_NEAR(re2 / im2, 1.0, 0.05);
  c.seed = 10;
  EXPECT_NE(apply_channel(zero, c).samples(), a.samples());
}

TEST(Channel, ValidateRejectsNegativeValues) {
  auto c = ChannelConfig::identity();
  c.delay = -1e-9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ChannelConfig::identity();
  c.noise_sigma = -0.1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ChannelConfig::identity();
  c.volterra.h1.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Channel, DefaultKernelIsNormalizedLowPass) {
  const auto k = default_distortion_kernel();
  Complex dc{0.0, 0.0};
  for (const auto& h : k.h1) dc += h;
  const Complex z = 0.95 * std::exp(Complex(0.0, 0.02));
  const Complex expect = 0.9 * 0.05 * (1.0 - std::pow(z, 64)) / (1.0 - z);
  EXPECT_LT(std::abs(dc - expect), 1e-12);
  EXPECT_LT(std::abs(dc), 0.9);
  EXPECT_EQ(k.memory(), 64u);
}

}  // namespace
}  // namespace owg
