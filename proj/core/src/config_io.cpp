#include "owg/config_io.hpp"

#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "owg/waveform_io.hpp"

namespace owg {
namespace {

using Json = nlohmann::ordered_json;

Json model_json(const VolterraModel& m) {
  std::vector<double> re;
  std::vector<double> im;
  for (const auto& c : m.h1) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  Json j;
  j["h0_re"] = m.h0.real();
  j["h0_im"] = m.h0.imag();
  j["h1_re"] = re;
  j["h1_im"] = im;
  return j;
}

VolterraModel model_of(const Json& j) {
  const auto re = j.at("h1_re").get<std::vector<double>>();
  const auto im = j.at("h1_im").get<std::vector<double>>();
  if (re.size() != im.size()) throw FormatError("model JSON: h1_re and h1_im lengths differ");
  VolterraModel m;
  m.h0 = Complex{j.value("h0_re", 0.0), j.value("h0_im", 0.0)};
  for (std::size_t k = 0; k < re.size(); ++k) m.h1.emplace_back(re[k], im[k]);
  m.validate();
  return m;
}

template <class T>
void take(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string model_to_json(const VolterraModel& model) { return model_json(model).dump(2) + "\n"; }

VolterraModel model_from_json(std::string_view text) {
  try {
    return model_of(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model JSON: ") + e.what());
  }
}

std::string channel_to_json(const ChannelConfig& c) {
  Json j;
  j["delay_s"] = c.delay;
  j["volterra"] = model_json(c.volterra);
  Json a;
  a["enabled"] = c.aom_enabled;
  a["v"] = c.aom.v;
  a["f_acoustic"] = c.aom.f_acoustic;
  a["wavelength"] = c.aom.wavelength;
  a["w0"] = c.aom.w0;
  a["n0"] = c.aom.n0;
  a["eta"] = c.aom.eta;
  a["theta0"] = c.aom.theta0;
  a["L1"] = c.aom.L1;
  a["L2"] = c.aom.L2;
  a["phi"] = c.aom.phi;
  a["steps"] = c.aom.steps;
  j["aom"] = a;
  j["mismatch_kappa"] = c.mismatch_kappa;
  j["noise_sigma"] = c.noise_sigma;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

ChannelConfig channel_from_json(std::string_view text) {
  try {
    const auto j = Json::parse(text);
    if (!j.is_object()) throw FormatError("channel JSON: expected an object");
    ChannelConfig c = ChannelConfig::identity();
    if (j.contains("preset")) {
      const auto preset = j.at("preset").get<std::string>();
      if (preset == "distorting") {
        c = ChannelConfig::distorting();
      } else if (preset != "identity") {
        throw FormatError("channel JSON: unknown preset '" + preset + "'");
      }
    }
    take(j, "delay_s", c.delay);
    if (j.contains("volterra")) c.volterra = model_of(j.at("volterra"));
    if (j.contains("aom")) {
      const auto& a = j.at("aom");
      take(a, "enabled", c.aom_enabled);
      take(a, "v", c.aom.v);
      take(a, "f_acoustic", c.aom.f_acoustic);
      take(a, "wavelength", c.aom.wavelength);
      take(a, "w0", c.aom.w0);
      take(a, "n0", c.aom.n0);
      take(a, "eta", c.aom.eta);
      take(a, "theta0", c.aom.theta0);
      take(a, "L1", c.aom.L1);
      take(a, "L2", c.aom.L2);
      take(a, "phi", c.aom.phi);
      take(a, "steps", c.aom.steps);
    }
    take(j, "mismatch_kappa", c.mismatch_kappa);
    take(j, "noise_sigma", c.noise_sigma);
    take(j, "seed", c.seed);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("channel JSON: ") + e.what());
  }
}

}  // namespace owg
