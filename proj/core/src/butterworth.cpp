#include "owg/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace owg {

FilterSpec design_lowpass(int order, double cutoff, double sample_rate) {
  if (order < 1 || order > 12) throw std::invalid_argument("design_lowpass: order must be in [1, 12]");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("design_lowpass: sample rate must be positive");
  if (!(cutoff > 0.0) || !(cutoff < 0.5 * sample_rate)) {
    throw std::invalid_argument("design_lowpass: cutoff must lie in (0, fs/2)");
  }

  FilterSpec spec{order, cutoff, sample_rate, {}};
  const double two_fs = 2.0 * sample_rate;
  const double warped = two_fs * std::tan(std::numbers::pi * cutoff / sample_rate);

  auto bilinear = [&](std::complex<double> s) { return (two_fs + s) / (two_fs - s); };
  auto analog_pole = [&](int k) {
    const double angle = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    return warped * std::polar(1.0, angle);
  };

  for (int k = 0; k < order / 2; ++k) {
    const auto z = bilinear(analog_pole(k));
    Biquad bq;
    bq.a1 = -2.0 * z.real();
    bq.a2 = std::norm(z);
    const double g = (1.0 + bq.a1 + bq.a2) / 4.0;
    bq.b0 = g;
    bq.b1 = 2.0 * g;
    bq.b2 = g;
    spec.sections.push_back(bq);
  }
  if (order % 2 == 1) {
    const double z = bilinear(std::complex<double>(-warped, 0.0)).real();
    Biquad bq;
    bq.a1 = -z;
    const double g = (1.0 + bq.a1) / 2.0;
    bq.b0 = g;
    bq.b1 = g;
    spec.sections.push_back(bq);
  }
  return spec;
}

double magnitude_response(const FilterSpec& filter, double frequency) {
  const double w = 2.0 * std::numbers::pi * frequency / filter.sample_rate;
  const auto z1 = std::polar(1.0, -w);
  const auto z2 = z1 * z1;
  std::complex<double> h{1.0, 0.0};
  for (const auto& s : filter.sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return std::abs(h);
}

bool is_stable(const FilterSpec& filter) {
  return std::all_of(filter.sections.begin(), filter.sections.end(), [](const Biquad& s) {
    return std::abs(s.a2) < 1.0 && std::abs(s.a1) < 1.0 + s.a2;
  });
}

std::size_t filtfilt_padding(const FilterSpec& filter) {
  return 3 * static_cast<std::size_t>(filter.order);
}

std::vector<double> sosfilt(const FilterSpec& filter, std::span<const double> x,
                            std::span<const double> initial_state) {
  const std::size_t n_sec = filter.sections.size();
  std::vector<double> state(2 * n_sec, 0.0);
  if (!initial_state.empty()) {
    if (initial_state.size() != state.size()) {
      throw std::invalid_argument("sosfilt: initial state needs two values per section");
    }
    std::copy(initial_state.begin(), initial_state.end(), state.begin());
  }
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t s = 0; s < n_sec; ++s) {
    const auto& c = filter.sections[s];
    double z1 = state[2 * s];
    double z2 = state[2 * s + 1];
    for (auto& v : y) {
      const double in = v;
      const double out = c.b0 * in + z1;
      z1 = c.b1 * in - c.a1 * out + z2;
      z2 = c.b2 * in - c.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> sosfilt_steady_state(const FilterSpec& filter) {
  std::vector<double> zi;
  zi.reserve(2 * filter.sections.size());
  double u = 1.0;  // steady input level seen by the current section
  for (const auto& c : filter.sections) {
    const double gain = (c.b0 + c.b1 + c.b2) / (1.0 + c.a1 + c.a2);
    const double z2 = (c.b2 - c.a2 * gain) * u;
    const double z1 = (c.b1 - c.a1 * gain) * u + z2;
    zi.push_back(z1);
    zi.push_back(z2);
    u *= gain;
  }
  return zi;
}

std::vector<double> filtfilt(const FilterSpec& filter, std::span<const double> x) {
  const std::size_t pad = filtfilt_padding(filter);
  const std::size_t n = x.size();
  if (n <= pad) {
    throw std::invalid_argument("filtfilt: sequence must be longer than " + std::to_string(pad) +
                                " samples");
  }

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  const auto zi = sosfilt_steady_state(filter);
  auto scaled = [&zi](double level) {
    std::vector<double> s(zi);
    for (auto& v : s) v *= level;
    return s;
  };

  auto forward = sosfilt(filter, ext, scaled(ext.front()));
  std::reverse(forward.begin(), forward.end());
  auto backward = sosfilt(filter, forward, scaled(forward.front()));
  std::reverse(backward.begin(), backward.end());

  return {backward.begin() + static_cast<std::ptrdiff_t>(pad),
          backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace owg
