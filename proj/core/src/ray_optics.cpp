#include "owg/ray_optics.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "owg/errors.hpp"

namespace owg {

Eigen::Matrix2d ABCDElement::matrix() const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  if (kind == ElementKind::kFreeSpace) m(0, 1) = value;
  if (kind == ElementKind::kThinLens) m(1, 0) = -1.0 / value;
  return m;
}

OpticalTrain& OpticalTrain::add_space(double d, std::string name) {
  elements_.push_back({ElementKind::kFreeSpace, d, std::move(name)});
  return *this;
}

OpticalTrain& OpticalTrain::add_lens(double f, std::string name) {
  elements_.push_back({ElementKind::kThinLens, f, std::move(name)});
  return *this;
}

OpticalTrain& OpticalTrain::add_marker(std::string name) {
  elements_.push_back({ElementKind::kMarker, 0.0, std::move(name)});
  return *this;
}

bool OpticalTrain::has_marker(std::string_view name) const {
  return std::any_of(elements_.begin(), elements_.end(),
                     [&](const ABCDElement& e) { return e.kind == ElementKind::kMarker && e.name == name; });
}

std::size_t OpticalTrain::marker_index(std::string_view marker) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].kind == ElementKind::kMarker && elements_[i].name == marker) return i;
  }
  throw std::invalid_argument("unknown marker '" + std::string(marker) + "'");
}

Eigen::Matrix2d OpticalTrain::matrix_to(std::string_view marker) const {
  const std::size_t end = marker_index(marker);
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (std::size_t i = 0; i < end; ++i) m = elements_[i].matrix() * m;
  return m;
}

Eigen::Matrix2d OpticalTrain::matrix() const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (const auto& e : elements_) m = e.matrix() * m;
  return m;
}

double OpticalTrain::position_of(std::string_view marker) const {
  const std::size_t end = marker_index(marker);
  double z = 0.0;
  for (std::size_t i = 0; i < end; ++i) {
    if (elements_[i].kind == ElementKind::kFreeSpace) z += elements_[i].value;
  }
  return z;
}

double OpticalTrain::total_length() const {
  double z = 0.0;
  for (const auto& e : elements_) {
    if (e.kind == ElementKind::kFreeSpace) z += e.value;
  }
  return z;
}

void OpticalTrain::set_spacing(std::string_view name, double d) {
  for (auto& e : elements_) {
    if (e.kind == ElementKind::kFreeSpace && e.name == name) {
      e.value = d;
      return;
    }
  }
  throw std::invalid_argument("unknown spacing '" + std::string(name) + "'");
}

double OpticalTrain::spacing(std::string_view name) const {
  for (const auto& e : elements_) {
    if (e.kind == ElementKind::kFreeSpace && e.name == name) return e.value;
  }
  throw std::invalid_argument("unknown spacing '" + std::string(name) + "'");
}

void OpticalTrain::validate() const {
  std::set<std::string> markers;
  for (const auto& e : elements_) {
    switch (e.kind) {
      case ElementKind::kFreeSpace:
        if (!(e.value >= 0.0)) throw std::invalid_argument("free-space distance must be nonnegative");
        break;
      case ElementKind::kThinLens:
        if (e.value == 0.0 || !std::isfinite(e.value)) throw std::invalid_argument("focal length must be finite and nonzero");
        break;
      case ElementKind::kMarker:
        if (e.name.empty()) throw std::invalid_argument("markers need a name");
        if (!markers.insert(e.name).second) throw std::invalid_argument("duplicate marker '" + e.name + "'");
        break;
    }
  }
}

double GaussianBeam::rayleigh_length() const { return std::numbers::pi * waist * waist / wavelength; }

std::complex<double> GaussianBeam::q() const { return {-waist_position, rayleigh_length()}; }

GaussianBeam GaussianBeam::from_q(std::complex<double> q, double wavelength) {
  if (!(q.imag() > 0.0)) throw std::invalid_argument("beam parameter must have a positive imaginary part");
  return GaussianBeam{wavelength, std::sqrt(q.imag() * wavelength / std::numbers::pi), -q.real()};
}

RayState propagate_ray(const OpticalTrain& train, const RayState& ray, std::string_view marker) {
  const Eigen::Vector2d out = train.matrix_to(marker) * Eigen::Vector2d(ray.L, ray.theta);
  return RayState{out(0), out(1)};
}

GaussianBeam propagate_beam(const OpticalTrain& train, const GaussianBeam& beam, std::string_view marker) {
  const auto m = train.matrix_to(marker);
  const auto q = beam.q();
  return GaussianBeam::from_q((m(0, 0) * q + m(0, 1)) / (m(1, 0) * q + m(1, 1)), beam.wavelength);
}

SensitivityReport sensitivity(const OpticalTrain& train, std::string_view marker) {
  const auto m = train.matrix_to(marker);
  return SensitivityReport{m(0, 1), m(1, 1), m(0, 0), m(1, 0), std::string(marker)};
}

ApertureResult aperture_check_at_marker(const RayState& at_marker, double aperture, double bragg_tolerance) {
  if (!(aperture > 0.0) || !(bragg_tolerance > 0.0)) {
    throw std::invalid_argument("aperture and Bragg tolerance must be positive");
  }
  ApertureResult r;
  r.at_marker = at_marker;
  r.position_margin = 0.5 * aperture - std::abs(at_marker.L);
  r.angle_margin = bragg_tolerance - std::abs(at_marker.theta);
  r.ok = r.position_margin >= 0.0 && r.angle_margin >= 0.0;
  return r;
}

ApertureResult aperture_check(const OpticalTrain& train, const RayState& perturbation, double aperture,
                              double bragg_tolerance, std::string_view marker) {
  return aperture_check_at_marker(propagate_ray(train, perturbation, marker), aperture, bragg_tolerance);
}

namespace {

double max_delta_t(double l_per_k, double theta_per_k, double aperture, double tol) {
  if (!(aperture > 0.0) || !(tol > 0.0)) throw std::invalid_argument("aperture and Bragg tolerance must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  const double by_l = l_per_k == 0.0 ? inf : 0.5 * aperture / std::abs(l_per_k);
  const double by_theta = theta_per_k == 0.0 ? inf : tol / std::abs(theta_per_k);
  return std::min(by_l, by_theta);
}

}  // namespace

double max_tolerated_delta_t(const ThermalCoefficients& drift, double aperture, double bragg_tolerance) {
  return max_delta_t(drift.position_per_kelvin, drift.angle_per_kelvin, aperture, bragg_tolerance);
}

double max_tolerated_delta_t(const OpticalTrain& train, std::string_view marker, const ThermalCoefficients& drift,
                             double aperture, double bragg_tolerance) {
  const auto r = propagate_ray(train, RayState{drift.position_per_kelvin, drift.angle_per_kelvin}, marker);
  return max_delta_t(r.L, r.theta, aperture, bragg_tolerance);
}

std::vector<WaistRow> waist_vs_input_waist(const OpticalTrain& train, double wavelength,
                                           const std::vector<double>& input_waists, std::string_view marker) {
  std::vector<WaistRow> rows;
  for (const double w : input_waists) {
    if (!(w > 0.0)) throw std::invalid_argument("input waists must be positive");
    const auto out = propagate_beam(train, GaussianBeam{wavelength, w, 0.0}, marker);
    const double zr = out.rayleigh_length();
    rows.push_back({w, out.waist, out.waist_position, zr, std::abs(out.waist_position) < zr});
  }
  return rows;
}

OpticalTrain design_single_lens(double wavelength, double input_waist, double output_waist) {
  if (!(wavelength > 0.0) || !(input_waist > output_waist) || !(output_waist > 0.0)) {
    throw std::invalid_argument("design_single_lens: need 0 < output waist < input waist");
  }
  const double z0 = std::numbers::pi * input_waist * input_waist / wavelength;
  const double ratio = input_waist / output_waist;
  const double f = z0 / std::sqrt(ratio * ratio - 1.0);
  const double d = f * z0 * z0 / (f * f + z0 * z0);
  OpticalTrain t;
  t.add_lens(f, "L1").add_space(d, "d").add_marker("aom");
  return t;
}

namespace {

OpticalTrain three_lens_train(const ThreeLensSpec& s, double k, double b, double d) {
  OpticalTrain t;
  t.add_lens(s.f1, "L1").add_space(k, "k").add_lens(s.f2, "L2").add_space(b, "b").add_lens(s.f3, "L3");
  t.add_space(d, "d").add_marker("aom");
  return t;
}

}  // namespace

OpticalTrain design_three_lens(double wavelength, double input_waist, double output_waist, const ThreeLensSpec& spec) {
  const auto single = design_single_lens(wavelength, input_waist, output_waist);
  if (!(spec.sensitivity_reduction > 0.0)) throw std::invalid_argument("design_three_lens: reduction must be positive");
  const double target_b = single.matrix_to("aom")(0, 1) / spec.sensitivity_reduction;
  const double z0 = std::numbers::pi * input_waist * input_waist / wavelength;
  const double m2 = (output_waist / input_waist) * (output_waist / input_waist);

  // Waist at the marker: Re q' = 0 and Im q' = m^2 z0, plus the sensitivity target.
  auto residual = [&](const Eigen::Vector3d& x) {
    const auto m = three_lens_train(spec, x(0), x(1), x(2)).matrix_to("aom");
    const double a = m(0, 0), bb = m(0, 1), c = m(1, 0), d = m(1, 1);
    return Eigen::Vector3d((bb * d + a * c * z0 * z0) / z0, (d * d + c * c * z0 * z0) * m2 - 1.0, bb / target_b - 1.0);
  };

  // Damped Gauss-Newton: the afocal telescope spacing k = f1 + f2 makes the
  // Jacobian singular, so an undamped Newton step can stall there.
  Eigen::Vector3d x(spec.k0, spec.b0, spec.d0);
  Eigen::Vector3d f = residual(x);
  double mu = 1e-3;
  for (int it = 0; it < 500 && f.norm() > 1e-13 && mu < 1e12; ++it) {
    Eigen::Matrix3d jac;
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-7 * std::max(1e-3, std::abs(x(i)));
      Eigen::Vector3d xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      jac.col(i) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * f;
    Eigen::Matrix3d damped = jtj;
    damped.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
    const Eigen::Vector3d trial = x - damped.ldlt().solve(g);
    if ((trial.array() > 0.0).all()) {
      const Eigen::Vector3d ft = residual(trial);
      if (ft.norm() < f.norm()) {
        x = trial;
        f = ft;
        mu = std::max(mu * 0.3, 1e-12);
        continue;
      }
    }
    mu *= 10.0;
  }
  if (!(f.norm() <= 1e-10)) throw NonConvergence("design_three_lens: spacing solve did not converge", f.norm());
  return three_lens_train(spec, x(0), x(1), x(2));
}

std::string train_to_json(const OpticalTrain& train) {
  using Json = nlohmann::ordered_json;
  Json els = Json::array();
  for (const auto& e : train.elements()) {
    Json j;
    switch (e.kind) {
      case ElementKind::kFreeSpace:
        j["type"] = "space";
        j["d"] = e.value;
        break;
      case ElementKind::kThinLens:
        j["type"] = "lens";
        j["f"] = e.value;
        break;
      case ElementKind::kMarker:
        j["type"] = "marker";
        break;
    }
    if (!e.name.empty()) j["name"] = e.name;
    els.push_back(j);
  }
  Json root;
  root["elements"] = els;
  return root.dump(2) + "\n";
}

OpticalTrain train_from_json(std::string_view text) {
  OpticalTrain t;
  try {
    const auto root = nlohmann::json::parse(text);
    for (const auto& e : root.at("elements")) {
      const auto type = e.at("type").get<std::string>();
      const auto name = e.value("name", std::string{});
      if (type == "space") {
        t.add_space(e.at("d").get<double>(), name);
      } else if (type == "lens") {
        t.add_lens(e.at("f").get<double>(), name);
      } else if (type == "marker") {
        t.add_marker(name);
      } else {
        throw std::invalid_argument("unknown element type '" + type + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("train JSON: ") + e.what());
  }
  t.validate();
  return t;
}

}  // namespace owg
