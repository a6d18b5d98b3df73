#include "owg/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace owg {

std::string_view to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::kTruncatedGaussian: return "truncated-gaussian";
    case PulseKind::kGaussian: return "gaussian";
    case PulseKind::kGateStandin: return "gate-standin";
    case PulseKind::kConstant: return "constant";
    case PulseKind::kCustomTable: return "custom-table";
  }
  return "unknown";
}

PulseKind parse_pulse_kind(std::string_view name) {
  for (auto kind : {PulseKind::kTruncatedGaussian, PulseKind::kGaussian, PulseKind::kGateStandin,
                    PulseKind::kConstant, PulseKind::kCustomTable}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown pulse kind '" + std::string(name) + "'");
}

namespace {

void validate(const PulseSpec& spec, const TimeGrid& grid, double center) {
  if (!(spec.duration > 0.0)) throw std::invalid_argument("make_pulse: duration must be positive");
  const double tol = 1e-6 * grid.dt();
  if (spec.duration > grid.span() + tol) {
    throw std::invalid_argument("make_pulse: duration exceeds the grid span");
  }
  if (center - 0.5 * spec.duration < grid.t0() - tol ||
      center + 0.5 * spec.duration > grid.back() + tol) {
    throw std::invalid_argument("make_pulse: pulse support falls outside the grid");
  }
  if (!(spec.peak > 0.0) || spec.peak > 1.0) {
    throw std::invalid_argument("make_pulse: peak must lie in (0, 1]");
  }
  const bool gaussian = spec.kind == PulseKind::kGaussian || spec.kind == PulseKind::kTruncatedGaussian;
  if (gaussian && !(spec.fwhm > 0.0)) throw std::invalid_argument("make_pulse: fwhm must be positive");
  if (spec.kind == PulseKind::kGateStandin) {
    if (!(spec.edge_fraction > 0.0) || spec.edge_fraction > 0.5) {
      throw std::invalid_argument("make_pulse: edge fraction must lie in (0, 0.5]");
    }
    if (!(spec.phase_profile.width_fraction > 0.0)) {
      throw std::invalid_argument("make_pulse: phase width must be positive");
    }
  }
  if (spec.kind == PulseKind::kCustomTable && spec.table.size() < 2) {
    throw std::invalid_argument("make_pulse: custom table needs at least two entries");
  }
}

double raised_cosine_flat_top(double tau, double duration, double edge) {
  // tau is measured from the start of the support.
  if (tau < edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * tau / edge));
  if (tau > duration - edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * (duration - tau) / edge));
  return 1.0;
}

Complex table_lookup(const std::vector<Complex>& table, double frac) {
  const double x = frac * static_cast<double>(table.size() - 1);
  const auto j = std::min(static_cast<std::size_t>(std::floor(x)), table.size() - 2);
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * table[j] + w * table[j + 1];
}

}  // namespace

ComplexEnvelope make_pulse(const PulseSpec& spec, const TimeGrid& grid) {
  const double center = spec.center.value_or(grid.t0() + 0.5 * grid.span());
  validate(spec, grid, center);

  const double start = center - 0.5 * spec.duration;
  const double tol = 1e-9 * grid.dt();
  const double gauss_rate = spec.fwhm > 0.0 ? 4.0 * std::numbers::ln2 / (spec.fwhm * spec.fwhm) : 0.0;

  std::vector<Complex> s(grid.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = grid.time(k);
    const double dt_c = t - center;
    const double tau = t - start;
    const bool inside = tau >= -tol && tau <= spec.duration + tol;
    const double tau_c = std::clamp(tau, 0.0, spec.duration);

    switch (spec.kind) {
      case PulseKind::kGaussian:
        s[k] = spec.peak * std::exp(-gauss_rate * dt_c * dt_c);
        break;
      case PulseKind::kTruncatedGaussian:
        if (inside) s[k] = spec.peak * std::exp(-gauss_rate * dt_c * dt_c);
        break;
      case PulseKind::kConstant:
        if (inside) s[k] = spec.peak;
        break;
      case PulseKind::kGateStandin:
        if (inside) {
          const double amp = spec.peak * raised_cosine_flat_top(tau_c, spec.duration,
                                                                spec.edge_fraction * spec.duration);
          const double width = spec.phase_profile.width_fraction * spec.duration;
          const double sigmoid = 1.0 / (1.0 + std::exp(-dt_c / width));
          s[k] = std::polar(amp, spec.phase_profile.jump * (sigmoid - 0.5));
        }
        break;
      case PulseKind::kCustomTable:
        if (inside) s[k] = spec.peak * table_lookup(spec.table, tau_c / spec.duration);
        break;
    }
  }
  return ComplexEnvelope(grid, std::move(s));
}

TimeGrid working_grid(double duration, double margin, double dt) {
  return TimeGrid::spanning(0.0, duration + 2.0 * margin, dt);
}

}  // namespace owg
