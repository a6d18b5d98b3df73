#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "unit/helpers.hpp"
#include "owg/alignment.hpp"
#include "owg/errors.hpp"
#include "owg/metrics.hpp"
#include "owg/pulse.hpp"

namespace owg {
namespace {

TEST(TimeGrid, RejectsDegenerateGrids) {
  EXPECT_THROW(TimeGrid(0.0, 0.0, 10), std::invalid_argument);
  EXPECT_THROW(TimeGrid(0.0, 1e-9, 1), std::invalid_argument);
  EXPECT_THROW(TimeGrid::spanning(1.0, 1.0, 1e-9), std::invalid_argument);
}

TEST(TimeGrid, SpanningCoversEndPoint) {
  const auto g = TimeGrid::spanning(0.0, 100e-9, 1e-9);
  EXPECT_EQ(g.size(), 101u);
  EXPECT_NEAR(g.back(), 100e-9, 1e-18);
}

TEST(ComplexEnvelope, IqSplitJoinRoundTrip) {
  std::mt19937_64 rng(3);
  const auto env = testing::random_envelope(64, rng);
  const auto [i, q] = iq_split(env);
  const auto back = iq_join(i, q, env.grid());
  EXPECT_EQ(back.samples(), env.samples());
}

TEST(ComplexEnvelope, PolarRoundTrip) {
  const TimeGrid g(0.0, 1e-9, 4);
  const std::vector<double> a{1.0, 0.5, 2.0, 0.0};
  const std::vector<double> p{0.1, -2.0, 3.0, 0.0};
  const auto env = ComplexEnvelope::from_polar(g, a, p);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(env.amplitude()[k], a[k], 1e-15);
    EXPECT_NEAR(env.phase()[k], p[k], 1e-15);
  }
}

TEST(ComplexEnvelope, UnwrapRemovesJumps) {
  std::vector<double> ph;
  for (int k = 0; k < 50; ++k) ph.push_back(std::remainder(0.3 * k, 2.0 * std::numbers::pi));
  unwrap(ph);
  for (int k = 0; k < 50; ++k) EXPECT_NEAR(ph[static_cast<std::size_t>(k)], 0.3 * k, 1e-12);
}

TEST(ComplexEnvelope, ArithmeticNeedsMatchingGrids) {
  const ComplexEnvelope a(TimeGrid(0.0, 1e-9, 8));
  const ComplexEnvelope b(TimeGrid(0.0, 1e-9, 9));
  EXPECT_THROW(a + b, GridMismatch);
  EXPECT_THROW(a - b, GridMismatch);
}

TEST(ComplexEnvelope, ShiftAndEmbed) {
  const TimeGrid g(0.0, 1e-9, 6);
  const ComplexEnvelope e(g, {1, 2, 3, 4, 5, 6});
  const auto d = shift_samples(e, 2);
  EXPECT_EQ(d[0], Complex(0.0));
  EXPECT_EQ(d[2], Complex(1.0));
  const auto a = shift_samples(e, -1);
  EXPECT_EQ(a[0], Complex(2.0));
  EXPECT_EQ(a[5], Complex(0.0));
  const auto big = embed(e, g.resized(10));
  EXPECT_EQ(big[5], Complex(6.0));
  EXPECT_EQ(big[9], Complex(0.0));
}

TEST(ComplexEnvelope, LinearResampleIsExactForLines) {
  const TimeGrid g(0.0, 1e-9, 11);
  std::vector<Complex> s;
  for (std::size_t k = 0; k < 11; ++k) s.emplace_back(2.0 * static_cast<double>(k), -1.0 * static_cast<double>(k));
  const ComplexEnvelope e(g, s);
  const auto fine = resample_linear(e, TimeGrid(0.0, 0.25e-9, 41));
  for (std::size_t k = 0; k < 41; ++k) {
    EXPECT_NEAR(fine[k].real(), 0.5 * static_cast<double>(k), 1e-12);
    EXPECT_NEAR(fine[k].imag(), -0.25 * static_cast<double>(k), 1e-12);
  }
}

TEST(Pulse, GaussianHasRequestedFwhm) {
  PulseSpec spec;
  spec.kind = PulseKind::kGaussian;
  spec.duration = 1e-6;
  spec.fwhm = 0.3e-6;
  const auto g = working_grid(1e-6, 0.0, 1e-10);
  const auto p = make_pulse(spec, g);
  const auto a = p.amplitude();
  const std::size_t mid = a.size() / 2;
  EXPECT_NEAR(a[mid], 1.0, 1e-12);
  const auto half = static_cast<std::size_t>(std::lround(0.15e-6 / 1e-10));
  EXPECT_NEAR(a[mid + half], 0.5, 1e-9);
  EXPECT_NEAR(a[mid - half], 0.5, 1e-9);
}

TEST(Pulse, TruncatedGaussianIsZeroOutsideSupport) {
  PulseSpec spec;
  spec.kind = PulseKind::kTruncatedGaussian;
  spec.duration = 200e-9;
  spec.fwhm = 100e-9;
  const auto g = working_grid(200e-9, 100e-9);
  const auto p = make_pulse(spec, g);
  EXPECT_EQ(p[0], Complex(0.0));
  EXPECT_EQ(p[g.size() - 1], Complex(0.0));
  EXPECT_GT(std::abs(p[g.size() / 2]), 0.99);
}

TEST(Pulse, GateStandinHasFlatTopAndPhaseStep) {
  PulseSpec spec;
  spec.kind = PulseKind::kGateStandin;
  spec.duration = 500e-9;
  const auto g = working_grid(500e-9, 150e-9);
  const auto p = make_pulse(spec, g);
  const auto ph = p.unwrapped_phase();
  const std::size_t start = 150 + 100;  // past the rising edge
  const std::size_t stop = 150 + 400;
  for (std::size_t k = start; k < stop; ++k) EXPECT_NEAR(std::abs(p[k]), 1.0, 1e-12);
  // Logistic step of scale 0.08 * duration, sampled 150 ns either side of centre.
  const double expect = std::numbers::pi * std::tanh(0.5 * 150e-9 / (0.08 * 500e-9));
  EXPECT_NEAR(ph[stop] - ph[start], expect, 2e-3);
}

TEST(Pulse, RejectsInvalidSpecs) {
  const auto g = working_grid(100e-9, 10e-9);
  PulseSpec spec;
  spec.kind = PulseKind::kGaussian;
  spec.duration = 100e-9;
  EXPECT_THROW(make_pulse(spec, g), std::invalid_argument);  // no fwhm
  spec.fwhm = 10e-9;
  spec.peak = 1.5;
  EXPECT_THROW(make_pulse(spec, g), std::invalid_argument);
  spec.peak = 1.0;
  spec.duration = 1e-6;
  EXPECT_THROW(make_pulse(spec, g), std::invalid_argument);
  EXPECT_THROW(parse_pulse_kind("square"), std::invalid_argument);
}

TEST(Mase, ZeroForIdenticalAndScaledInputs) {
  std::mt19937_64 rng(5);
  const auto a = testing::random_envelope(100, rng);
  EXPECT_EQ(mase(a, a), 0.0);
  EXPECT_NEAR(mase(Complex(3.0, 4.0) * a, a), 0.0, 1e-16);
}

TEST(Mase, KnownValue) {
  const TimeGrid g(0.0, 1e-9, 2);
  const ComplexEnvelope a(g, {1.0, 0.0});
  const ComplexEnvelope b(g, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(mase(a, b), 1.0);
}

TEST(Mase, Errors) {
  const ComplexEnvelope z(TimeGrid(0.0, 1e-9, 4));
  const ComplexEnvelope one(TimeGrid(0.0, 1e-9, 4), {1, 1, 1, 1});
  EXPECT_THROW(mase(z, one), ZeroSignal);
  EXPECT_THROW(mase(one, ComplexEnvelope(TimeGrid(0.0, 1e-9, 5))), GridMismatch);
}

TEST(Alignment, RecoversConstructedShiftUnderNoise) {
  PulseSpec spec;
  spec.kind = PulseKind::kGaussian;
  spec.duration = 300e-9;
  spec.fwhm = 100e-9;
  const auto g = working_grid(300e-9, 100e-9);
  const auto ref = make_pulse(spec, g);
  auto shifted = shift_samples(ref, 17);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<Complex> s = shifted.samples();
  for (auto& v : s) v += Complex(n(rng), n(rng));
  const auto a = align_delay(ComplexEnvelope(g, s), ref);
  EXPECT_EQ(a.lag, 17);
  EXPECT_NEAR(a.delay, 17e-9, 1e-15);
  EXPECT_LT(mase(a.envelope, ref), 5e-3);
}

TEST(Alignment, HandlesLongerMeasurementAndWindow) {
  PulseSpec spec;
  spec.kind = PulseKind::kGaussian;
  spec.duration = 100e-9;
  spec.fwhm = 30e-9;
  const auto g = working_grid(100e-9, 20e-9);
  const auto ref = make_pulse(spec, g);
  const auto longer = shift_samples(embed(ref, g.resized(g.size() + 500)), 400);
  const auto a = align_delay(longer, ref);
  EXPECT_EQ(a.lag, 400);
  EXPECT_LT(mase(a.envelope, ref), 1e-15);
  const auto w = window_at_lag(longer, g, 398);
  EXPECT_EQ(w[2], ref[0]);
  EXPECT_EQ(w[10], ref[8]);
}

TEST(Alignment, ZeroSignalThrows) {
  const ComplexEnvelope z(TimeGrid(0.0, 1e-9, 8));
  const ComplexEnvelope one(TimeGrid(0.0, 1e-9, 8), std::vector<Complex>(8, 1.0));
  EXPECT_THROW(align_delay(z, one), ZeroSignal);
  EXPECT_THROW(align_delay(one, z), ZeroSignal);
}

}  // namespace
}  // namespace owg
