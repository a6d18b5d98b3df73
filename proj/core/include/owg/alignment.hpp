#pragma once

#include "owg/envelope.hpp"

namespace owg {

struct Alignment {
  ComplexEnvelope envelope;  // measured content re-sampled onto the reference grid
  double delay = 0.0;        // s, positive when measured lags reference
  long lag = 0;              // samples between the grids' index origins
};

/// Integer-sample alignment of `measured` to `reference` by maximizing the
/// cross-correlation of the amplitude envelopes. Both must share the sample
/// period; lengths may differ. The result lives on the reference grid, with
/// samples that fall outside `measured` set to zero. Ties favour the
/// smallest |lag|. Throws ZeroSignal if either input is identically zero.
Alignment align_delay(const ComplexEnvelope& measured, const ComplexEnvelope& reference);

/// out[k] = raw[k + lag] on `grid`, zero where raw has no sample.
ComplexEnvelope window_at_lag(const ComplexEnvelope& raw, const TimeGrid& grid, long lag);

}  // namespace owg
