#pragma once

#include <cstdint>

#include "owg/aom.hpp"
#include "owg/envelope.hpp"
#include "owg/volterra.hpp"

namespace owg {

/// Simulated device under test.
struct ChannelConfig {
  double delay = 0.0;  // s, applied as a whole number of samples
  VolterraModel volterra = VolterraModel::identity();
  bool aom_enabled = false;
  AcoustoOpticParams aom;
  double mismatch_kappa = 0.0;  // rad/m
  double noise_sigma = 0.0;     // rms of the complex noise, E|n|^2 = sigma^2
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on negative delay or noise, or an invalid kernel or AOM block.
  void validate() const;

  /// Pass-through: no delay, unit kernel, AOM off, no noise.
  static ChannelConfig identity();

  /// 1.4 us delay, 64-tap minimum-phase low-pass kernel, AOM on with the
  /// calibrated chirp, and a noise level giving a 1e-3 demodulated MASE floor on 180 ns pulses.
  static ChannelConfig distorting();
};

/// Kernel of the distorting channel: h1_j = g (1 - a) a^j e^{i beta j}, j < taps.
VolterraModel default_distortion_kernel(std::size_t taps = 64, double gain = 0.9, double pole = 0.95,
                                        double twist = 0.02);

/// Envelope-level complex noise rms used by ChannelConfig::distorting().
inline constexpr double kDefaultChannelNoise = 0.0283;

/// delay -> Volterra kernel -> AOM quadrature phase -> additive complex noise.
/// Output is on the input grid; content delayed past the end is dropped.
/// Repeated calls with the same config are bit-identical.
ComplexEnvelope apply_channel(const ComplexEnvelope& input, const ChannelConfig& config);

/// Only the quadrature-phase stage: u * exp(i theta'), theta' from |u|.
ComplexEnvelope apply_quadrature_distortion(const ComplexEnvelope& u, const AcoustoOpticParams& params,
                                            double kappa);

/// Number of samples the delay corresponds to on a grid of period dt.
long delay_samples(double delay, double dt);

}  // namespace owg
