#include "owg/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace owg {

void ChannelConfig::validate() const {
  if (!(delay >= 0.0)) throw std::invalid_argument("ChannelConfig: delay must be nonnegative");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("ChannelConfig: noise_sigma must be nonnegative");
  if (!std::isfinite(mismatch_kappa)) throw std::invalid_argument("ChannelConfig: mismatch_kappa must be finite");
  volterra.validate();
  if (aom_enabled) aom.validate();
}

ChannelConfig ChannelConfig::identity() { return ChannelConfig{}; }

ChannelConfig ChannelConfig::distorting() {
  ChannelConfig c;
  c.delay = 1.4e-6;
  c.volterra = default_distortion_kernel();
  c.aom_enabled = true;
  c.mismatch_kappa = default_kappa(c.aom);
  c.noise_sigma = kDefaultChannelNoise;
  c.seed = 1;
  return c;
}

VolterraModel default_distortion_kernel(std::size_t taps, double gain, double pole, double twist) {
  VolterraModel m;
  m.h1.resize(taps);
  for (std::size_t j = 0; j < taps; ++j) {
    const double jd = static_cast<double>(j);
    m.h1[j] = gain * (1.0 - pole) * std::pow(pole, jd) * std::polar(1.0, twist * jd);
  }
  return m;
}

long delay_samples(double delay, double dt) { return std::lround(delay / dt); }

ComplexEnvelope apply_quadrature_distortion(const ComplexEnvelope& u, const AcoustoOpticParams& params,
                                            double kappa) {
  if (u.peak_amplitude() == 0.0) return u;
  const auto r = reflectance_trace(u.grid(), u.amplitude(), params, kappa);
  const auto theta = quadrature_phase(r);
  std::vector<Complex> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] * std::polar(1.0, theta[k]);
  return ComplexEnvelope(u.grid(), std::move(out));
}

ComplexEnvelope apply_channel(const ComplexEnvelope& input, const ChannelConfig& config) {
  config.validate();
  auto x = shift_samples(input, delay_samples(config.delay, input.grid().dt()));
  auto y = volterra_forward(config.volterra, x);
  if (config.aom_enabled) y = apply_quadrature_distortion(y, config.aom, config.mismatch_kappa);
  if (config.noise_sigma > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> n(0.0, config.noise_sigma / std::sqrt(2.0));
    std::vector<Complex> s(y.samples());
    for (auto& v : s) {
      const double re = n(rng);
      const double im = n(rng);
      v += Complex{re, im};
    }
    y = ComplexEnvelope(y.grid(), std::move(s));
  }
  return y;
}

}  // namespace owg
