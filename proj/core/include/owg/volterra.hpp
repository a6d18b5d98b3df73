#pragma once

#include <vector>

#include "owg/envelope.hpp"

namespace owg {

/// Truncated first-order Volterra kernel: out_n = h0 + sum_j h1[j] * in_{n-j}.
struct VolterraModel {
  Complex h0{0.0, 0.0};
  std::vector<Complex> h1;

  std::size_t memory() const noexcept { return h1.size(); }

  /// h0 = 0, h1 = (1).
  static VolterraModel identity();
  /// Throws std::invalid_argument if M == 0 or any tap is non-finite.
  void validate() const;
};

/// Causal convolution with zero initial conditions. Output is on the input grid.
/// Throws std::invalid_argument if the memory exceeds the input length.
ComplexEnvelope volterra_forward(const VolterraModel& model, const ComplexEnvelope& input);

/// Same contract as volterra_forward.
ComplexEnvelope fitted_output(const VolterraModel& model, const ComplexEnvelope& input);

}  // namespace owg
