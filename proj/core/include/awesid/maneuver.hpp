#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "awesid/airframe.hpp"
#include "awesid/dynamics.hpp"

namespace awesid {

enum class ManeuverKind { ThreeTwoOneOne, Doublet, PiecewiseConstant };

std::string to_string(ManeuverKind kind);
ManeuverKind maneuver_kind_from_string(const std::string& name);

/// Excitation signal description. Amplitudes and knot values are elevator
/// deviations from trim, radians.
struct ManeuverSpec {
  ManeuverKind kind = ManeuverKind::ThreeTwoOneOne;
  double amplitude = deg2rad(2.0);  // rad
  double base_interval = 0.6;       // s, the unit interval of the step sequence
  double lead_in = 1.0;             // s of trim hold before the signal starts
  double total_duration = 20.0;     // s
  std::vector<double> knots;        // PiecewiseConstant only, rad

  void validate() const;
};

/// Flight envelope bounds. States are absolute quantities, as is the
/// elevator deflection. The defaults are conservative placeholders for the
/// reference aircraft, not measured limits.
struct Envelope {
  double airspeed_min = 12.0, airspeed_max = 30.0;        // m/s
  double alpha_min = deg2rad(-10.0), alpha_max = deg2rad(10.0);
  double theta_min = deg2rad(-45.0), theta_max = deg2rad(45.0);
  double q_min = deg2rad(-50.0), q_max = deg2rad(50.0);   // rad/s
  double delta_e_min = deg2rad(-10.0), delta_e_max = deg2rad(10.0);

  void validate() const;
};

enum class EnvelopeChannel { Airspeed, Alpha, Theta, PitchRate, Elevator };
std::string to_string(EnvelopeChannel channel);

struct MonitorResult {
  bool ok = true;
  std::size_t index = 0;          // first violating sample
  EnvelopeChannel channel = EnvelopeChannel::Airspeed;
};

/// 3-2-1-1 step sequence: +A for 3 dT, -A for 2 dT, +A for dT, -A for dT,
/// zero elsewhere, shifted by the lead-in. Sample k takes the value of the
/// interval containing t_k (floor indexing), so off-grid switching times are
/// resolved deterministically.
std::vector<double> generate_3211(double amplitude, double base_interval, double sample_period,
                                  double lead_in, double total_duration);

/// Doublet: +A for dT, -A for dT, zero elsewhere.
std::vector<double> generate_doublet(double amplitude, double base_interval, double sample_period,
                                     double lead_in, double total_duration);

/// Piecewise-constant signal with equally long knot intervals spanning
/// [lead_in, total_duration].
std::vector<double> generate_piecewise(const std::vector<double>& knots, double sample_period,
                                       double lead_in, double total_duration);

std::vector<double> generate(const ManeuverSpec& spec, double sample_period);

/// Scans states and input; reports the first envelope violation.
MonitorResult monitor(const Trajectory& trajectory, const Envelope& envelope);

}  // namespace awesid
