#include <iostream>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "owg/ray_optics.hpp"

namespace owg::cli {
namespace {

using Json = nlohmann::ordered_json;

struct TrainOpts {
  std::string train;
  std::string design = "three";
  double wavelength = 405e-9;
  double input_waist = 1200e-6;
  double output_waist = 63e-6;
  double reduction = ThreeLensSpec{}.sensitivity_reduction;
  std::string marker = "aom";
  CLI::Option* design_flag = nullptr;

  void add_to(CLI::App* sub) {
    auto* t = sub->add_option("--train", train, "Optical train JSON");
    design_flag = sub->add_option("--design", design, "Built-in design when no --train: single | three")
        ->capture_default_str()
        ->excludes(t);
    sub->add_option("--wavelength", wavelength, "Wavelength, m")->capture_default_str();
    sub->add_option("--input-waist", input_waist, "Design input waist, m")->capture_default_str();
    sub->add_option("--output-waist", output_waist, "Design waist at the modulator, m")->capture_default_str();
    sub->add_option("--reduction", reduction, "Three-lens |dL/dtheta_in| reduction vs the single lens")
        ->capture_default_str();
    sub->add_option("--marker", marker, "Marker plane to evaluate")->capture_default_str();
  }

  OpticalTrain built_in(const std::string& name) const {
    if (name == "single") return design_single_lens(wavelength, input_waist, output_waist);
    if (name == "three") {
      ThreeLensSpec spec;
      spec.sensitivity_reduction = reduction;
      return design_three_lens(wavelength, input_waist, output_waist, spec);
    }
    throw UsageError("unknown design '" + name + "' (single | three)");
  }

  OpticalTrain load(RunContext& ctx) const {
    auto t = train.empty() ? built_in(design) : train_from_json(ctx.read_input(train));
    t.validate();
    if (!t.has_marker(marker)) throw UsageError("train has no marker '" + marker + "'");
    return t;
  }

  std::string label() const { return train.empty() ? design : "custom"; }

  Json snapshot() const {
    return {{"train", train.empty() ? Json(nullptr) : Json(train)},
            {"design", train.empty() ? Json(design) : Json(nullptr)},
            {"wavelength", wavelength},
            {"input_waist", input_waist},
            {"output_waist", output_waist},
            {"reduction", reduction},
            {"marker", marker}};
  }
};

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw UsageError("sweeps need at least two points");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

void add_design(CLI::App* optics, std::vector<Command>& out) {
  auto o = std::make_shared<TrainOpts>();
  auto* sub = optics->add_subcommand("design", "Write a built-in train matched to the design waists");
  o->add_to(sub);
  out.push_back({"optics design", sub, [o](RunContext& ctx) {
                   const auto t = o->load(ctx);
                   ctx.config() = o->snapshot();
                   ctx.write("train.json", train_to_json(t));
                   const auto m = t.matrix_to(o->marker);
                   std::cout << "A " << num(m(0, 0)) << "  B " << num(m(0, 1)) << "  C " << num(m(1, 0)) << "  D "
                             << num(m(1, 1)) << "  length " << num(t.total_length()) << " m\n";
                   return 0;
                 }});
}

void add_sensitivity(CLI::App* optics, std::vector<Command>& out) {
  struct Opts : TrainOpts {
    double theta_max = 1e-3;
    int points = 21;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = optics->add_subcommand(
      "sensitivity", "Partial derivatives of (L, theta) at the marker; compares both designs without --train");
  o->add_to(sub);
  sub->add_option("--theta-max", o->theta_max, "Input angle sweep half-range, rad")->capture_default_str();
  sub->add_option("--points", o->points, "Sweep points")->capture_default_str();
  out.push_back({"optics sensitivity", sub, [o](RunContext& ctx) {
                   std::vector<std::pair<std::string, OpticalTrain>> trains;
                   const bool compare = o->train.empty() && o->design_flag->count() == 0;
                   if (compare) {
                     trains.emplace_back("single", o->built_in("single"));
                     trains.emplace_back("three", o->built_in("three"));
                   } else {
                     trains.emplace_back(o->label(), o->load(ctx));
                   }
                   std::ostringstream table;
                   std::ostringstream sweep;
                   table << "design,marker,dL_dtheta_in,dtheta_dtheta_in,dL_dL_in,dtheta_dL_in\n";
                   sweep << "design,theta_in_rad,L_m,theta_rad\n";
                   std::vector<double> b;
                   for (const auto& [name, t] : trains) {
                     const auto s = sensitivity(t, o->marker);
                     b.push_back(s.dL_dtheta_in);
                     table << name << ',' << o->marker << ',' << num(s.dL_dtheta_in) << ','
                           << num(s.dtheta_dtheta_in) << ',' << num(s.dL_dL_in) << ',' << num(s.dtheta_dL_in)
                           << '\n';
                     for (const double th : linspace(-o->theta_max, o->theta_max, o->points)) {
                       const auto r = propagate_ray(t, RayState{0.0, th}, o->marker);
                       sweep << name << ',' << num(th) << ',' << num(r.L) << ',' << num(r.theta) << '\n';
                     }
                   }
                   auto cfg = o->snapshot();
                   cfg["theta_max"] = o->theta_max;
                   cfg["points"] = o->points;
                   ctx.config() = cfg;
                   ctx.write("sensitivity.csv", table.str());
                   ctx.write("sensitivity_sweep.csv", sweep.str());
                   if (b.size() == 2) {
                     std::cout << "|dL/dtheta_in| single/three = " << num(std::abs(b[0] / b[1])) << "\n";
                   }
                   return 0;
                 }});
}

void add_aperture(CLI::App* optics, std::vector<Command>& out) {
  struct Opts : TrainOpts {
    std::string drift = "compact";
    std::optional<double> angle_per_k;
    std::optional<double> position_per_k;
    std::string inject = "aom";
    double dt_max = 20.0;
    int points = 81;
    double aperture = kAomAperture;
    double bragg = kBraggTolerance;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = optics->add_subcommand("aperture", "Thermal drift vs modulator aperture and Bragg tolerance");
  o->add_to(sub);
  sub->add_option("--drift", o->drift, "Measured drift set: compact | reference")->capture_default_str();
  sub->add_option("--angle-per-k", o->angle_per_k, "Override angular drift, rad/K");
  sub->add_option("--position-per-k", o->position_per_k, "Override position drift, m/K");
  sub->add_option("--inject", o->inject, "Where the drift acts: aom (modulator plane) | input (train input)")
      ->capture_default_str();
  sub->add_option("--dt-max", o->dt_max, "Largest temperature change in the table, K")->capture_default_str();
  sub->add_option("--points", o->points, "Table rows")->capture_default_str();
  sub->add_option("--aperture", o->aperture, "Active aperture, m")->capture_default_str();
  sub->add_option("--bragg", o->bragg, "Bragg angle tolerance, rad")->capture_default_str();
  out.push_back({"optics aperture", sub, [o](RunContext& ctx) {
                   ThermalCoefficients drift;
                   if (o->drift == "compact") {
                     drift = kCompactDrift;
                   } else if (o->drift == "reference") {
                     drift = kReferenceDrift;
                   } else {
                     throw UsageError("unknown drift set '" + o->drift + "' (compact | reference)");
                   }
                   if (o->angle_per_k) drift.angle_per_kelvin = *o->angle_per_k;
                   if (o->position_per_k) drift.position_per_kelvin = *o->position_per_k;
                   if (o->inject != "aom" && o->inject != "input") throw UsageError("--inject must be aom or input");
                   const bool at_input = o->inject == "input";

                   std::optional<OpticalTrain> train;
                   if (at_input) train = o->load(ctx);
                   std::ostringstream table;
                   table << "delta_t_K,L_m,theta_rad,position_margin_m,angle_margin_rad,ok\n";
                   for (const double dT : linspace(0.0, o->dt_max, o->points)) {
                     const RayState ray{drift.position_per_kelvin * dT, drift.angle_per_kelvin * dT};
                     const auto r = at_input ? aperture_check(*train, ray, o->aperture, o->bragg, o->marker)
                                             : aperture_check_at_marker(ray, o->aperture, o->bragg);
                     table << num(dT) << ',' << num(r.at_marker.L) << ',' << num(r.at_marker.theta) << ','
                           << num(r.position_margin) << ',' << num(r.angle_margin) << ',' << (r.ok ? 1 : 0) << '\n';
                   }
                   const double tolerated =
                       at_input ? max_tolerated_delta_t(*train, o->marker, drift, o->aperture, o->bragg)
                                : max_tolerated_delta_t(drift, o->aperture, o->bragg);
                   auto cfg = at_input ? o->snapshot() : Json::object();
                   cfg["drift"] = {{"angle_per_k", drift.angle_per_kelvin}, {"position_per_k", drift.position_per_kelvin}};
                   cfg["inject"] = o->inject;
                   cfg["aperture"] = o->aperture;
                   cfg["bragg_tolerance"] = o->bragg;
                   cfg["dt_max"] = o->dt_max;
                   cfg["points"] = o->points;
                   ctx.config() = cfg;
                   ctx.write("aperture.csv", table.str());
                   std::cout << "max tolerated delta T " << num(tolerated) << " K\n";
                   return 0;
                 }});
}

void add_waist_sweep(CLI::App* optics, std::vector<Command>& out) {
  struct Opts : TrainOpts {
    double w_min = 300e-6;
    double w_max = 1500e-6;
    int points = 25;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = optics->add_subcommand("waist-sweep", "Waist size and position at the marker vs input waist");
  o->add_to(sub);
  sub->add_option("--w-min", o->w_min, "Smallest input waist, m")->capture_default_str();
  sub->add_option("--w-max", o->w_max, "Largest input waist, m")->capture_default_str();
  sub->add_option("--points", o->points, "Sweep points")->capture_default_str();
  out.push_back({"optics waist-sweep", sub, [o](RunContext& ctx) {
                   const auto t = o->load(ctx);
                   const auto rows = waist_vs_input_waist(t, o->wavelength, linspace(o->w_min, o->w_max, o->points),
                                                          o->marker);
                   std::ostringstream table;
                   table << "input_waist_m,waist_m,waist_offset_m,rayleigh_length_m,waist_at_marker\n";
                   for (const auto& r : rows) {
                     table << num(r.input_waist) << ',' << num(r.waist) << ',' << num(r.waist_offset) << ','
                           << num(r.rayleigh_length) << ',' << (r.waist_at_marker ? 1 : 0) << '\n';
                   }
                   auto cfg = o->snapshot();
                   cfg["w_min"] = o->w_min;
                   cfg["w_max"] = o->w_max;
                   cfg["points"] = o->points;
                   ctx.config() = cfg;
                   ctx.write("waist_sweep.csv", table.str());
                   return 0;
                 }});
}

}  // namespace

void add_optics_command(CLI::App& root, std::vector<Command>& out) {
  auto* optics = root.add_subcommand("optics", "Ray and Gaussian-beam analysis of the beam-delivery trains");
  optics->require_subcommand(1);
  add_design(optics, out);
  add_sensitivity(optics, out);
  add_aperture(optics, out);
  add_waist_sweep(optics, out);
}

}  // namespace owg::cli
