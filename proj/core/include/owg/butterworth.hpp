#pragma once

#include <span>
#include <vector>

namespace owg {

/// Second-order section in transposed direct form II:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
/// A first-order section has b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct FilterSpec {
  int order = 0;
  double cutoff = 0.0;       // Hz, -3 dB point
  double sample_rate = 0.0;  // Hz
  std::vector<Biquad> sections;
};

/// Digital Butterworth low-pass via the prewarped bilinear transform,
/// realized as a cascade of biquads each normalized to unity DC gain.
/// Requires 1 <= order <= 12 and 0 < cutoff < sample_rate / 2.
FilterSpec design_lowpass(int order, double cutoff, double sample_rate);

/// |H(e^{j 2 pi f / fs})| of the cascade.
double magnitude_response(const FilterSpec& filter, double frequency);

/// True if every section has both poles strictly inside the unit circle.
bool is_stable(const FilterSpec& filter);

/// Edge padding used by filtfilt: 3 * order samples on each side.
std::size_t filtfilt_padding(const FilterSpec& filter);

/// Single causal pass with the given per-section initial states (two per section).
std::vector<double> sosfilt(const FilterSpec& filter, std::span<const double> x,
                            std::span<const double> initial_state = {});

/// Per-section states for which a constant unit input is already at steady state.
std::vector<double> sosfilt_steady_state(const FilterSpec& filter);

/// Zero-phase forward-backward filtering with odd-reflection padding of
/// filtfilt_padding() samples and steady-state initial conditions scaled by
/// the first padded sample of each pass. The effective response is |H|^2.
/// Throws std::invalid_argument if x is not longer than the padding.
std::vector<double> filtfilt(const FilterSpec& filter, std::span<const double> x);

}  // namespace owg
