#pragma once

#include <string>
#include <string_view>

#include "owg/channel.hpp"
#include "owg/volterra.hpp"

namespace owg {

// Model JSON: {"h0_re", "h0_im", "h1_re": [...], "h1_im": [...]}.
std::string model_to_json(const VolterraModel& model);
VolterraModel model_from_json(std::string_view text);

// Channel JSON. Missing keys keep the values of the starting point, which is
// ChannelConfig::identity() unless "preset": "distorting" is given.
//   {"preset", "delay_s", "volterra": <model>, "aom": {"enabled", "v", "f_acoustic",
//    "wavelength", "w0", "n0", "eta", "theta0", "L1", "L2", "phi", "steps"},
//    "mismatch_kappa", "noise_sigma", "seed"}
std::string channel_to_json(const ChannelConfig& config);
ChannelConfig channel_from_json(std::string_view text);

}  // namespace owg
