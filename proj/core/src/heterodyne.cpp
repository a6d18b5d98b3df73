#include "owg/heterodyne.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace owg {

BeatTrace synthesize_beat(const ComplexEnvelope& env, double beat_frequency, double sample_rate,
                          double noise_sigma, std::uint64_t seed) {
  if (!(beat_frequency > 0.0)) throw std::invalid_argument("synthesize_beat: beat frequency must be positive");
  if (!(sample_rate > 2.0 * beat_frequency)) {
    throw std::invalid_argument("synthesize_beat: sample rate aliases the beat note");
  }
  if (noise_sigma < 0.0) throw std::invalid_argument("synthesize_beat: negative noise level");

  const double dt = 1.0 / sample_rate;
  const auto n = static_cast<std::size_t>(std::floor(env.grid().span() / dt + 1e-9)) + 1;
  const TimeGrid grid(env.grid().t0(), dt, n);
  const auto fine = resample_linear(env, grid);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

  std::vector<double> v(n);
  const double omega = 2.0 * std::numbers::pi * beat_frequency;
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = (fine[k] * std::polar(1.0, omega * grid.time(k))).real();
    if (noise_sigma > 0.0) v[k] += noise(rng);
  }
  return BeatTrace{grid, std::move(v)};
}

ComplexEnvelope demodulate(const BeatTrace& trace, double beat_frequency, const FilterSpec& filter,
                           const TimeGrid& out_grid) {
  if (!(filter.cutoff < beat_frequency)) {
    throw std::invalid_argument("demodulate: cutoff must be below the beat frequency");
  }
  const double fs = trace.grid.sample_rate();
  if (std::abs(filter.sample_rate - fs) > 1e-9 * fs) {
    throw std::invalid_argument("demodulate: filter designed for a different sample rate");
  }
  const double tol = 1e-6 * trace.grid.dt();
  if (out_grid.t0() < trace.grid.t0() - tol || out_grid.back() > trace.grid.back() + tol) {
    throw std::invalid_argument("demodulate: output grid extends beyond the trace");
  }

  const std::size_t n = trace.samples.size();
  std::vector<double> i(n);
  std::vector<double> q(n);
  const double omega = 2.0 * std::numbers::pi * beat_frequency;
  for (std::size_t k = 0; k < n; ++k) {
    const auto mixed = 2.0 * trace.samples[k] * std::polar(1.0, -omega * trace.grid.time(k));
    i[k] = mixed.real();
    q[k] = mixed.imag();
  }
  const auto i_f = filtfilt(filter, i);
  const auto q_f = filtfilt(filter, q);
  return resample_linear(iq_join(i_f, q_f, trace.grid), out_grid);
}

ComplexEnvelope heterodyne_roundtrip(const ComplexEnvelope& env, const HeterodyneConfig& config) {
  const auto trace = synthesize_beat(env, config.beat_frequency, config.sample_rate, config.noise_sigma,
                                     config.seed);
  const auto filter = design_lowpass(config.filter_order, config.cutoff, config.sample_rate);
  return demodulate(trace, config.beat_frequency, filter, env.grid());
}

}  // namespace owg
