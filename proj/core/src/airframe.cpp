#include "awesid/airframe.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace awesid {

void AircraftConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("AircraftConfig: ") + what);
  };
  require(std::isfinite(mass) && mass > 0.0, "mass must be positive");
  require(j_x > 0.0 && j_y > 0.0 && j_z > 0.0, "moments of inertia must be positive");
  require(j_x * j_z - j_xz * j_xz > 0.0, "inertia tensor must be positive definite");
  require(wing_area > 0.0 && wing_span > 0.0 && chord > 0.0,
          "reference geometry must be positive");
  require(air_density > 0.0, "air density must be positive");
  require(gravity > 0.0, "gravity must be positive");
}

std::array<double, AeroDerivatives::kNumLongitudinal> AeroDerivatives::longitudinal() const {
  return {CX_0, CX_alpha, CX_q, CX_delta_e,
          CZ_0, CZ_alpha, CZ_q, CZ_delta_e,
          Cm_0, Cm_alpha, Cm_q, Cm_delta_e};
}

void AeroDerivatives::set_longitudinal(const std::array<double, kNumLongitudinal>& v) {
  CX_0 = v[0];
  CX_alpha = v[1];
  CX_q = v[2];
  CX_delta_e = v[3];
  CZ_0 = v[4];
  CZ_alpha = v[5];
  CZ_q = v[6];
  CZ_delta_e = v[7];
  Cm_0 = v[8];
  Cm_alpha = v[9];
  Cm_q = v[10];
  Cm_delta_e = v[11];
}

const std::array<std::string, AeroDerivatives::kNumLongitudinal>&
AeroDerivatives::longitudinal_names() {
  static const std::array<std::string, kNumLongitudinal> names = {
      "C_X0", "C_Xalpha", "C_Xq", "C_Xde",
      "C_Z0", "C_Zalpha", "C_Zq", "C_Zde",
      "C_m0", "C_malpha", "C_mq", "C_mde"};
  return names;
}

void AeroDerivatives::validate() const {
  for (double v : longitudinal()) {
    if (!std::isfinite(v))
      throw std::invalid_argument("AeroDerivatives: non-finite longitudinal derivative");
  }
  if (lateral) {
    const LateralDerivatives& l = *lateral;
    const double vals[] = {l.CY_beta, l.CY_p, l.CY_r, l.CY_delta_a, l.CY_delta_r,
                           l.Cl_beta, l.Cl_p, l.Cl_r, l.Cl_delta_a, l.Cl_delta_r,
                           l.Cn_beta, l.Cn_p, l.Cn_r, l.Cn_delta_a, l.Cn_delta_r};
    for (double v : vals) {
      if (!std::isfinite(v))
        throw std::invalid_argument("AeroDerivatives: non-finite lateral derivative");
    }
  }
}

bool AeroDerivatives::plausible(std::string* why) const {
  std::ostringstream oss;
  bool ok = true;
  if (CZ_alpha >= 0.0) {
    oss << "CZ_alpha >= 0 (lift slope sign); ";
    ok = false;
  }
  if (Cm_alpha >= 0.0) {
    oss << "Cm_alpha >= 0 (statically unstable); ";
    ok = false;
  }
  if (Cm_q >= 0.0) {
    oss << "Cm_q >= 0 (negative pitch damping); ";
    ok = false;
  }
  if (!ok && why) *why = oss.str();
  return ok;
}

double dynamic_pressure(double airspeed, const AircraftConfig& config) {
  return 0.5 * config.air_density * airspeed * airspeed;
}

NormalizedRates normalized_rates(const BodyRates& rates, double airspeed,
                                 const AircraftConfig& config) {
  if (!(airspeed > 0.0)) throw std::domain_error("normalized_rates: airspeed must be positive");
  const double half_v = 2.0 * airspeed;
  return {config.wing_span * rates.p / half_v, config.chord * rates.q / half_v,
          config.wing_span * rates.r / half_v};
}

AeroCoefficients coefficients(const AeroDerivatives& derivs, const AeroAngles& angles,
                              const BodyRates& rates, const ControlSurfaces& surfaces,
                              const AircraftConfig& config) {
  const NormalizedRates n = normalized_rates(rates, angles.airspeed, config);
  AeroCoefficients c;
  c.CX = derivs.CX_alpha * angles.alpha + derivs.CX_q * n.q_hat +
         derivs.CX_delta_e * surfaces.delta_e + derivs.CX_0;
  c.CZ = derivs.CZ_alpha * angles.alpha + derivs.CZ_q * n.q_hat +
         derivs.CZ_delta_e * surfaces.delta_e + derivs.CZ_0;
  c.Cm = derivs.Cm_alpha * angles.alpha + derivs.Cm_q * n.q_hat +
         derivs.Cm_delta_e * surfaces.delta_e + derivs.Cm_0;
  if (derivs.lateral) {
    const LateralDerivatives& l = *derivs.lateral;
    c.CY = l.CY_beta * angles.beta + l.CY_p * n.p_hat + l.CY_r * n.r_hat +
           l.CY_delta_a * surfaces.delta_a + l.CY_delta_r * surfaces.delta_r;
    c.Cl = l.Cl_beta * angles.beta + l.Cl_p * n.p_hat + l.Cl_r * n.r_hat +
           l.Cl_delta_a * surfaces.delta_a + l.Cl_delta_r * surfaces.delta_r;
    c.Cn = l.Cn_beta * angles.beta + l.Cn_p * n.p_hat + l.Cn_r * n.r_hat +
           l.Cn_delta_a * surfaces.delta_a + l.Cn_delta_r * surfaces.delta_r;
  }
  return c;
}

ForcesMoments forces_moments(const AeroCoefficients& coeffs, double airspeed,
                             const AircraftConfig& config) {
  const double qs = dynamic_pressure(airspeed, config) * config.wing_area;
  ForcesMoments fm;
  fm.X = qs * coeffs.CX;
  fm.Y = qs * coeffs.CY;
  fm.Z = qs * coeffs.CZ;
  fm.L = qs * config.wing_span * coeffs.Cl;
  fm.M = qs * config.chord * coeffs.Cm;
  fm.N = qs * config.wing_span * coeffs.Cn;
  return fm;
}

WindGravity gravity_wind_axes(const AeroAngles& angles, double roll, double pitch,
                              double gravity_down) {
  const double sa = std::sin(angles.alpha), ca = std::cos(angles.alpha);
  const double sb = std::sin(angles.beta), cb = std::cos(angles.beta);
  const double sphi = std::sin(roll), cphi = std::cos(roll);
  const double sth = std::sin(pitch), cth = std::cos(pitch);
  WindGravity g;
  g.g_airspeed = gravity_down * (sb * sphi * sth - ca * cb * sth + sa * cb * cphi * cth);
  g.g_beta = gravity_down * (ca * sb * sth + cb * sphi * cth - sa * sb * cphi * cth);
  g.g_alpha = gravity_down * (sa * sth + ca * cphi * cth);
  return g;
}

DimensionalDerivatives dimensionalize(const AeroDerivatives& derivs, double trim_speed,
                                      const AircraftConfig& config) {
  if (!(trim_speed > 0.0)) throw std::domain_error("dimensionalize: trim speed must be positive");
  const double v = trim_speed;
  const double qbar = dynamic_pressure(v, config);
  const double s = config.wing_area;
  const double c = config.chord;
  const double m = config.mass;
  const double jy = config.j_y;

  DimensionalDerivatives d;
  d.X_v = config.air_density * v * s / m * derivs.CX_0;
  d.X_alpha = qbar * s / m * derivs.CX_alpha;
  d.X_q = qbar * s * c / (2.0 * v * m) * derivs.CX_q;
  d.X_delta_e = qbar * s / m * derivs.CX_delta_e;
  d.Z_v = config.air_density * s / m * derivs.CZ_0;
  d.Z_alpha_over_v = qbar * s / (m * v) * derivs.CZ_alpha;
  d.Z_q = 1.0 + qbar * s * c / (2.0 * v * v * m) * derivs.CZ_q;
  d.Z_delta_e_over_v = qbar * s / (m * v) * derivs.CZ_delta_e;
  d.M_v = 0.0;
  d.M_alpha = qbar * s * c / jy * derivs.Cm_alpha;
  d.M_q = qbar * s * c * c / (2.0 * v * jy) * derivs.Cm_q;
  d.M_delta_e = qbar * s * c / jy * derivs.Cm_delta_e;
  return d;
}

AeroDerivatives dedimensionalize(const DimensionalDerivatives& dims, double trim_speed,
                                 const AircraftConfig& config, double cm_0) {
  if (!(trim_speed > 0.0))
    throw std::domain_error("dedimensionalize: trim speed must be positive");
  const double v = trim_speed;
  const double qbar = dynamic_pressure(v, config);
  const double s = config.wing_area;
  const double c = config.chord;
  const double m = config.mass;
  const double jy = config.j_y;

  AeroDerivatives derivs;
  derivs.CX_0 = dims.X_v * m / (config.air_density * v * s);
  derivs.CX_alpha = dims.X_alpha * m / (qbar * s);
  derivs.CX_q = dims.X_q * 2.0 * v * m / (qbar * s * c);
  derivs.CX_delta_e = dims.X_delta_e * m / (qbar * s);
  derivs.CZ_0 = dims.Z_v * m / (config.air_density * s);
  derivs.CZ_alpha = dims.Z_alpha_over_v * m * v / (qbar * s);
  derivs.CZ_q = (dims.Z_q - 1.0) * 2.0 * v * v * m / (qbar * s * c);
  derivs.CZ_delta_e = dims.Z_delta_e_over_v * m * v / (qbar * s);
  derivs.Cm_0 = cm_0;
  derivs.Cm_alpha = dims.M_alpha * jy / (qbar * s * c);
  derivs.Cm_q = dims.M_q * 2.0 * v * jy / (qbar * s * c * c);
  derivs.Cm_delta_e = dims.M_delta_e * jy / (qbar * s * c);
  return derivs;
}

}  // namespace awesid
