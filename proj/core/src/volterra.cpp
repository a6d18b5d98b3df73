#include "owg/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owg {

VolterraModel VolterraModel::identity() {
  return VolterraModel{Complex{0.0, 0.0}, {Complex{1.0, 0.0}}};
}

void VolterraModel::validate() const {
  if (h1.empty()) throw std::invalid_argument("VolterraModel: memory must be at least one tap");
  auto finite = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  if (!finite(h0) || !std::all_of(h1.begin(), h1.end(), finite)) {
    throw std::invalid_argument("VolterraModel: non-finite coefficient");
  }
}

ComplexEnvelope volterra_forward(const VolterraModel& model, const ComplexEnvelope& input) {
  model.validate();
  const std::size_t n = input.size();
  const std::size_t m = model.memory();
  if (m > n) throw std::invalid_argument("volterra_forward: memory exceeds signal length");
  const auto& x = input.samples();
  std::vector<Complex> y(n, model.h0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t jmax = std::min(m, k + 1);
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < jmax; ++j) acc += model.h1[j] * x[k - j];
    y[k] += acc;
  }
  return ComplexEnvelope(input.grid(), std::move(y));
}

ComplexEnvelope fitted_output(const VolterraModel& model, const ComplexEnvelope& input) {
  return volterra_forward(model, input);
}

}  // namespace owg
