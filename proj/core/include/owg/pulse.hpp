#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "owg/envelope.hpp"

namespace owg {

enum class PulseKind { kTruncatedGaussian, kGaussian, kGateStandin, kConstant, kCustomTable };

std::string_view to_string(PulseKind kind);
/// Accepts the kebab-case names ("truncated-gaussian", "gate-standin", ...).
PulseKind parse_pulse_kind(std::string_view name);

/// Phase profile of the gate stand-in: one sigmoidal step of `jump` radians
/// centred mid-pulse, logistic scale `width_fraction * duration`.
struct GatePhaseProfile {
  double jump = std::numbers::pi;
  double width_fraction = 0.08;
};

struct PulseSpec {
  PulseKind kind = PulseKind::kTruncatedGaussian;
  double duration = 0.0;  // s, support of the pulse
  double fwhm = 0.0;      // s, Gaussian kinds only
  double peak = 1.0;
  std::optional<double> center;  // s, defaults to the grid midpoint
  double edge_fraction = 0.15;   // gate stand-in raised-cosine edge length / duration
  GatePhaseProfile phase_profile;
  std::vector<Complex> table;  // custom-table samples spread uniformly over the duration
};

/// Samples the pulse on `grid`. Throws std::invalid_argument for a
/// non-positive or oversize duration, a bad width, or a peak outside (0, 1].
ComplexEnvelope make_pulse(const PulseSpec& spec, const TimeGrid& grid);

/// 1 ns working grid covering `duration` plus `margin` on each side.
TimeGrid working_grid(double duration, double margin, double dt = 1e-9);

}  // namespace owg
