#include "owg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "owg/errors.hpp"

namespace owg {

double mase(const ComplexEnvelope& measured, const ComplexEnvelope& target) {
  require_same_grid(measured.grid(), target.grid(), "mase");
  const double norm_m = measured.norm();
  const double norm_t = target.norm();
  if (norm_m == 0.0 || norm_t == 0.0) {
    throw ZeroSignal("mase: zero-norm envelope");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    acc += std::abs(std::abs(measured[k]) / norm_m - std::abs(target[k]) / norm_t);
  }
  return acc / static_cast<double>(measured.size());
}

double mse_cost(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a.grid(), b.grid(), "mse_cost");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::norm(a[k] - b[k]);
  return acc / static_cast<double>(a.size());
}

MetricReport evaluate(const ComplexEnvelope& measured, const ComplexEnvelope& target) {
  MetricReport report;
  report.mase = mase(measured, target);
  report.mse = mse_cost(measured, target);

  const double floor = 0.1 * target.peak_amplitude();
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const double am = std::abs(measured[k]);
    const double at = std::abs(target[k]);
    report.peak_amplitude_error = std::max(report.peak_amplitude_error, std::abs(am - at));
    if (at >= floor && am > 0.0) {
      const double d = std::arg(measured[k] * std::conj(target[k]));
      report.peak_phase_error = std::max(report.peak_phase_error, std::abs(d));
    }
  }
  return report;
}

}  // namespace owg
