#include "owg/alignment.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "owg/errors.hpp"

namespace owg {

Alignment align_delay(const ComplexEnvelope& measured, const ComplexEnvelope& reference) {
  const double dt = reference.grid().dt();
  if (std::abs(measured.grid().dt() - dt) > 1e-9 * dt) {
    throw GridMismatch("align_delay: sample periods differ");
  }
  const auto a_meas = measured.amplitude();
  const auto a_ref = reference.amplitude();

  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < a_ref.size(); ++k) {
    if (a_ref[k] > 0.0) support.push_back(k);
  }
  if (support.empty()) throw ZeroSignal("align_delay: reference is identically zero");
  if (measured.peak_amplitude() == 0.0) throw ZeroSignal("align_delay: measured is identically zero");

  const auto n_meas = static_cast<long>(a_meas.size());
  const auto n_ref = static_cast<long>(a_ref.size());
  long best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (long lag = -(n_ref - 1); lag <= n_meas - 1; ++lag) {
    double c = 0.0;
    for (const auto k : support) {
      const long j = static_cast<long>(k) + lag;
      if (j >= 0 && j < n_meas) c += a_ref[k] * a_meas[static_cast<std::size_t>(j)];
    }
    if (c > best || (c == best && std::labs(lag) < std::labs(best_lag))) {
      best = c;
      best_lag = lag;
    }
  }

  std::vector<Complex> out(reference.size(), Complex{0.0, 0.0});
  for (long k = 0; k < n_ref; ++k) {
    const long j = k + best_lag;
    if (j >= 0 && j < n_meas) out[static_cast<std::size_t>(k)] = measured[static_cast<std::size_t>(j)];
  }
  const double delay = static_cast<double>(best_lag) * dt + (measured.grid().t0() - reference.grid().t0());
  return Alignment{ComplexEnvelope(reference.grid(), std::move(out)), delay, best_lag};
}

ComplexEnvelope window_at_lag(const ComplexEnvelope& raw, const TimeGrid& grid, long lag) {
  std::vector<Complex> out(grid.size(), Complex{0.0, 0.0});
  const auto n_raw = static_cast<long>(raw.size());
  for (long k = 0; k < static_cast<long>(grid.size()); ++k) {
    const long j = k + lag;
    if (j >= 0 && j < n_raw) out[static_cast<std::size_t>(k)] = raw[static_cast<std::size_t>(j)];
  }
  return ComplexEnvelope(grid, std::move(out));
}

}  // namespace owg
