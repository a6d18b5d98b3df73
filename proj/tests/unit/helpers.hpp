#pragma once

#include <random>
#include <vector>

#include "owg/envelope.hpp"
#include "owg/volterra.hpp"

namespace owg::testing {

inline ComplexEnvelope random_envelope(std::size_t n, std::mt19937_64& rng, double dt = 1e-9) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> s(n);
  for (auto& v : s) v = {g(rng), g(rng)};
  return ComplexEnvelope(TimeGrid(0.0, dt, n), std::move(s));
}

inline VolterraModel random_kernel(std::size_t memory, std::mt19937_64& rng, bool with_offset = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  VolterraModel m;
  if (with_offset) m.h0 = {0.1 * g(rng), 0.1 * g(rng)};
  m.h1.resize(memory);
  for (auto& v : m.h1) v = {g(rng), g(rng)};
  return m;
}

inline double max_rel_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

}  // namespace owg::testing
