#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace owg {

/// Paraxial ray: height L (m) and angle theta (rad).
struct RayState {
  double L = 0.0;
  double theta = 0.0;

  /// False beyond 0.1 rad, where the small-angle model stops being trustworthy.
  bool paraxial() const { return std::abs(theta) <= 0.1; }
};

enum class ElementKind { kFreeSpace, kThinLens, kMarker };

struct ABCDElement {
  ElementKind kind = ElementKind::kFreeSpace;
  double value = 0.0;  // distance for free space, focal length for a lens
  std::string name;    // marker name, or an optional label for a spacing

  Eigen::Matrix2d matrix() const;
};

/// Ordered element list; markers are zero-length named planes.
class OpticalTrain {
public:
  OpticalTrain& add_space(double d, std::string name = {});
  OpticalTrain& add_lens(double f, std::string name = {});
  OpticalTrain& add_marker(std::string name);

  const std::vector<ABCDElement>& elements() const noexcept { return elements_; }
  bool has_marker(std::string_view name) const;

  /// Product of all element matrices up to the marker (the last element first).
  /// Throws std::invalid_argument on an unknown marker.
  Eigen::Matrix2d matrix_to(std::string_view marker) const;
  Eigen::Matrix2d matrix() const;

  double position_of(std::string_view marker) const;
  double total_length() const;

  /// Sets the distance of the free-space element labelled `name`.
  void set_spacing(std::string_view name, double d);
  double spacing(std::string_view name) const;

  /// Throws std::invalid_argument on negative spacings, zero focal lengths or duplicate markers.
  void validate() const;

private:
  std::size_t marker_index(std::string_view marker) const;
  std::vector<ABCDElement> elements_;
};

/// Gaussian beam described at a reference plane. waist_position is the distance
/// from that plane to the waist, positive downstream.
struct GaussianBeam {
  double wavelength = 405e-9;
  double waist = 1200e-6;
  double waist_position = 0.0;

  double rayleigh_length() const;
  /// q = z + i zR with z the distance past the waist.
  std::complex<double> q() const;
  static GaussianBeam from_q(std::complex<double> q, double wavelength);
};

RayState propagate_ray(const OpticalTrain& train, const RayState& ray, std::string_view marker);

/// q' = (A q + B) / (C q + D) with the matrix up to the marker.
GaussianBeam propagate_beam(const OpticalTrain& train, const GaussianBeam& beam, std::string_view marker);

struct SensitivityReport {
  double dL_dtheta_in = 0.0;      // B, m/rad
  double dtheta_dtheta_in = 0.0;  // D
  double dL_dL_in = 0.0;          // A
  double dtheta_dL_in = 0.0;      // C, rad/m
  std::string marker;
};

SensitivityReport sensitivity(const OpticalTrain& train, std::string_view marker);

struct ApertureResult {
  bool ok = false;
  double position_margin = 0.0;  // aperture/2 - |L|, m
  double angle_margin = 0.0;     // tolerance - |theta|, rad
  RayState at_marker;
};

/// Perturbation injected at the train input and propagated to the marker.
/// Passing is inclusive of the boundary. Throws on non-positive aperture or tolerance.
ApertureResult aperture_check(const OpticalTrain& train, const RayState& perturbation, double aperture,
                              double bragg_tolerance, std::string_view marker);

/// Same test for a deviation already expressed at the modulator plane.
ApertureResult aperture_check_at_marker(const RayState& at_marker, double aperture, double bragg_tolerance);

/// Pointing drift per kelvin.
struct ThermalCoefficients {
  double angle_per_kelvin = 0.0;     // rad/K
  double position_per_kelvin = 0.0;  // m/K
};

/// Measured drifts at the modulator plane for the compact and the lab setups.
inline constexpr ThermalCoefficients kCompactDrift{10e-6, 2e-6};
inline constexpr ThermalCoefficients kReferenceDrift{23e-6, 11e-6};
inline constexpr double kAomAperture = 0.6e-3;
inline constexpr double kBraggTolerance = 125e-6;

/// Largest temperature change for which the drift ray stays inside the
/// aperture and Bragg tolerance, drift injected at the modulator plane.
double max_tolerated_delta_t(const ThermalCoefficients& drift, double aperture, double bragg_tolerance);

/// As above with the drift injected at the train input.
double max_tolerated_delta_t(const OpticalTrain& train, std::string_view marker, const ThermalCoefficients& drift,
                             double aperture, double bragg_tolerance);

struct WaistRow {
  double input_waist = 0.0;
  double waist = 0.0;          // waist radius of the beam leaving the marker plane
  double waist_offset = 0.0;   // waist position relative to the marker, m
  double rayleigh_length = 0.0;
  bool waist_at_marker = false;  // |offset| < Rayleigh length
};

/// Input waist located at the train input for every row.
std::vector<WaistRow> waist_vs_input_waist(const OpticalTrain& train, double wavelength,
                                           const std::vector<double>& input_waists, std::string_view marker);

/// Lens at the input waist, then the free space that places the output waist at marker "aom".
OpticalTrain design_single_lens(double wavelength, double input_waist, double output_waist);

struct ThreeLensSpec {
  double f1 = 0.100;   // Galilean telescope, positive lens
  double f2 = -0.020;  // Galilean telescope, negative lens
  double f3 = 0.050;   // focusing lens
  double sensitivity_reduction = 2.5;  // |dL/dtheta_in| of the single-lens design divided by this
  double k0 = 0.08, b0 = 0.2, d0 = 0.05;  // starting spacings
};

/// Galilean telescope plus convex lens; solves the spacings k (telescope), b and d
/// by damped Gauss-Newton so that the waist lands on marker "aom" with the requested size
/// and the angle sensitivity hits the target. Throws NonConvergence on failure.
OpticalTrain design_three_lens(double wavelength, double input_waist, double output_waist,
                               const ThreeLensSpec& spec = {});

std::string train_to_json(const OpticalTrain& train);
OpticalTrain train_from_json(std::string_view text);

}  // namespace owg
