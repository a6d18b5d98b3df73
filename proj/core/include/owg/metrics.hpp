#pragma once

#include "owg/envelope.hpp"

namespace owg {

struct MetricReport {
  double mase = 0.0;
  double mse = 0.0;
  double peak_amplitude_error = 0.0;  // max_k | |m_k| - |t_k| |
  double peak_phase_error = 0.0;      // rad, over samples where |t_k| >= 10% of its peak
};

/// Mean absolute scaled error between normalized amplitude profiles:
///   (1/N) sum_k | |m_k| / ||m|| - |t_k| / ||t|| |.
/// Throws GridMismatch for different grids and ZeroSignal for a zero-norm input.
double mase(const ComplexEnvelope& measured, const ComplexEnvelope& target);

/// (1/N) sum_k |a_k - b_k|^2.
double mse_cost(const ComplexEnvelope& a, const ComplexEnvelope& b);

MetricReport evaluate(const ComplexEnvelope& measured, const ComplexEnvelope& target);

}  // namespace owg
