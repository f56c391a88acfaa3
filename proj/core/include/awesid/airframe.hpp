#pragma once

#include <array>
#include <optional>
#include <string>

namespace awesid {

/// Converts degrees to radians. Angles are radians everywhere inside the
/// library; degrees appear only at I/O boundaries.
constexpr double deg2rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

/// Physical constants of the airframe. Defaults describe the reference
/// rigid-wing aircraft; air density and gravity are overridable.
struct AircraftConfig {
  double mass = 36.8;       // kg
  double j_x = 25.0;        // kg m^2
  double j_y = 32.0;        // kg m^2
  double j_z = 56.0;        // kg m^2
  double j_xz = 0.47;       // kg m^2, cross moment (J_xy, J_yz are zero)
  double wing_area = 3.0;   // m^2, reference area S
  double wing_span = 5.5;   // m, span b
  double chord = 0.55;      // m, mean aerodynamic chord
  double air_density = 1.225;  // kg/m^3
  double gravity = 9.81;       // m/s^2, positive down

  /// Throws std::invalid_argument on non-physical values (non-positive
  /// mass/inertia/geometry, or an indefinite inertia tensor J_x*J_z <= J_xz^2).
  void validate() const;
};

/// Dimensionless lateral derivative set. Optional: longitudinal-only work
/// never touches it.
struct LateralDerivatives {
  double CY_beta = 0.0, CY_p = 0.0, CY_r = 0.0, CY_delta_a = 0.0, CY_delta_r = 0.0;
  double Cl_beta = 0.0, Cl_p = 0.0, Cl_r = 0.0, Cl_delta_a = 0.0, Cl_delta_r = 0.0;
  double Cn_beta = 0.0, Cn_p = 0.0, Cn_r = 0.0, Cn_delta_a = 0.0, Cn_delta_r = 0.0;
};

/// Dimensionless aerodynamic derivatives of the linear coefficient buildup.
/// Longitudinal defaults are the baseline (a-priori) model.
struct AeroDerivatives {
  double CX_0 = -0.033, CX_alpha = 0.409, CX_q = -0.603, CX_delta_e = -0.011;
  double CZ_0 = -0.528, CZ_alpha = -4.225, CZ_q = -7.500, CZ_delta_e = -0.310;
  double Cm_0 = -0.031, Cm_alpha = -0.607, Cm_q = -11.300, Cm_delta_e = -1.420;
  std::optional<LateralDerivatives> lateral;

  static constexpr int kNumLongitudinal = 12;

  /// Longitudinal set as a flat vector, ordered X-row, Z-row, m-row
  /// (bias, alpha, q, delta_e within each row). This ordering is the
  /// parameter convention shared by the estimator and the Fisher analysis.
  std::array<double, kNumLongitudinal> longitudinal() const;
  void set_longitudinal(const std::array<double, kNumLongitudinal>& values);

  static const std::array<std::string, kNumLongitudinal>& longitudinal_names();

  /// Throws std::invalid_argument if any value is non-finite.
  void validate() const;

  /// Soft plausibility check: a statically stable set has CZ_alpha < 0,
  /// Cm_alpha < 0, Cm_q < 0. Returns false and fills `why` when violated;
  /// never throws, the estimator must be free to explore.
  bool plausible(std::string* why = nullptr) const;
};

/// Relative-wind state: angle of attack, side-slip, true airspeed.
struct AeroAngles {
  double alpha = 0.0;     // rad
  double beta = 0.0;      // rad
  double airspeed = 0.0;  // m/s
};

struct BodyRates {
  double p = 0.0, q = 0.0, r = 0.0;  // rad/s
};

struct ControlSurfaces {
  double delta_a = 0.0, delta_e = 0.0, delta_r = 0.0;  // rad
};

struct NormalizedRates {
  double p_hat = 0.0, q_hat = 0.0, r_hat = 0.0;  // dimensionless
};

struct AeroCoefficients {
  double CX = 0.0, CY = 0.0, CZ = 0.0;  // force coefficients
  double Cl = 0.0, Cm = 0.0, Cn = 0.0;  // moment coefficients
};

struct ForcesMoments {
  double X = 0.0, Y = 0.0, Z = 0.0;  // N, body axes
  double L = 0.0, M = 0.0, N = 0.0;  // N m
};

/// Gravity components along the wind-frame velocity, side-slip and
/// angle-of-attack channels.
struct WindGravity {
  double g_airspeed = 0.0;  // m/s^2
  double g_beta = 0.0;
  double g_alpha = 0.0;
};

/// Entries of the longitudinal state-space matrices ("dimensional
/// derivatives"). Entries named *_over_v are already divided by the trim
/// speed, matching their position in the alpha-dot row.
struct DimensionalDerivatives {
  double X_v = 0.0, X_alpha = 0.0, X_q = 0.0, X_delta_e = 0.0;
  double Z_v = 0.0, Z_alpha_over_v = 0.0, Z_q = 0.0, Z_delta_e_over_v = 0.0;
  double M_v = 0.0, M_alpha = 0.0, M_q = 0.0, M_delta_e = 0.0;
};

/// q_bar = 1/2 rho V^2.
double dynamic_pressure(double airspeed, const AircraftConfig& config);

/// p_hat = b p / (2 V), q_hat = c q / (2 V), r_hat = b r / (2 V).
/// Throws std::domain_error for non-positive airspeed.
NormalizedRates normalized_rates(const BodyRates& rates, double airspeed,
                                 const AircraftConfig& config);

/// Linear coefficient buildup. Lateral channels evaluate to zero when no
/// lateral derivative set is present.
AeroCoefficients coefficients(const AeroDerivatives& derivs, const AeroAngles& angles,
                              const BodyRates& rates, const ControlSurfaces& surfaces,
                              const AircraftConfig& config);

/// Denormalizes coefficients with the dynamic pressure and reference
/// geometry: X = q_bar S CX, ..., M = q_bar S c_bar Cm, ...
ForcesMoments forces_moments(const AeroCoefficients& coeffs, double airspeed,
                             const AircraftConfig& config);

/// Gravity vector rotated into wind axes; preserves the norm g_down.
WindGravity gravity_wind_axes(const AeroAngles& angles, double roll, double pitch,
                              double gravity_down);

/// Converts the dimensionless longitudinal set into the state-space matrix
/// entries at the given trim speed. Throws std::domain_error for
/// non-positive trim speed.
DimensionalDerivatives dimensionalize(const AeroDerivatives& derivs, double trim_speed,
                                      const AircraftConfig& config);

/// Inverse of dimensionalize(). Cm_0 has no dimensional image (the moment
/// bias vanishes at trim), so its value must be supplied.
AeroDerivatives dedimensionalize(const DimensionalDerivatives& dims, double trim_speed,
                                 const AircraftConfig& config, double cm_0 = 0.0);

}  // namespace awesid
