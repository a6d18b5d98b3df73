#pragma once

#include <cstdint>
#include <vector>

#include "owg/butterworth.hpp"
#include "owg/envelope.hpp"

namespace owg {

/// Real photodetector record of the heterodyne beat note.
struct BeatTrace {
  TimeGrid grid;
  std::vector<double> samples;
};

/// Beat-note acquisition and demodulation settings. Defaults follow a 100 MHz
/// modulator in double pass: 200 MHz beat sampled at 2 GS/s, order-4 low-pass at 120 MHz.
struct HeterodyneConfig {
  double beat_frequency = 200e6;
  double sample_rate = 2e9;
  int filter_order = 4;
  double cutoff = 120e6;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

/// v(t) = Re[s(t) e^{i 2 pi f_beat t}] + n(t), with s linearly interpolated to
/// the trace rate and n white Gaussian of standard deviation noise_sigma.
/// Deterministic for a given seed. Throws std::invalid_argument when
/// sample_rate <= 2 f_beat.
BeatTrace synthesize_beat(const ComplexEnvelope& env, double beat_frequency, double sample_rate,
                          double noise_sigma, std::uint64_t seed);

/// IQ demodulation: mix with e^{-i 2 pi f_beat t}, scale by 2, zero-phase
/// low-pass both channels, then resample onto out_grid.
ComplexEnvelope demodulate(const BeatTrace& trace, double beat_frequency, const FilterSpec& filter,
                           const TimeGrid& out_grid);

/// synthesize_beat followed by demodulate back onto the envelope's own grid.
ComplexEnvelope heterodyne_roundtrip(const ComplexEnvelope& env, const HeterodyneConfig& config);

}  // namespace owg
