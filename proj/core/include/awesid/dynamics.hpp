#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "awesid/airframe.hpp"

namespace awesid {

/// Wind-axes state of the full nonlinear model.
struct FullState {
  double airspeed = 0.0;  // V_T, m/s
  double beta = 0.0;      // side-slip, rad
  double alpha = 0.0;     // angle of attack, rad
  double phi = 0.0;       // roll, rad
  double theta = 0.0;     // pitch, rad
  double psi = 0.0;       // yaw, rad
  double p = 0.0, q = 0.0, r = 0.0;  // body rates, rad/s
};

/// Longitudinal wind-axes state [V_T alpha theta q].
struct LonState {
  double airspeed = 0.0;  // m/s
  double alpha = 0.0;     // rad
  double theta = 0.0;     // rad
  double q = 0.0;         // rad/s

  Eigen::Vector4d vector() const { return {airspeed, alpha, theta, q}; }
  static LonState from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Steady wing-level equilibrium: zero rates, zero roll and side-slip.
struct TrimPoint {
  double trim_speed = 0.0;     // m/s
  double alpha = 0.0;          // rad
  double theta = 0.0;          // rad
  double delta_e = 0.0;        // rad
  double residual_norm = 0.0;  // norm of the state derivative at the solution

  LonState state() const { return {trim_speed, alpha, theta, 0.0}; }
};

/// LTI model x_dot = A x + B u around a trim point.
struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
};

struct Mode {
  std::string name;
  std::complex<double> eigenvalue;
  bool oscillatory = false;
  double omega_n = 0.0;        // rad/s, |lambda|
  double damping = 0.0;        // -Re(lambda)/|lambda|
  double tau = 0.0;            // s, 1/omega_n
  double overshoot_pct = 0.0;  // only meaningful for damping < 1
  double period = 0.0;         // s, NaN for aperiodic or critically damped modes
};

struct ModeReport {
  std::vector<Mode> modes;  // sorted fastest first

  const Mode* find(const std::string& name) const;
};

/// Thrown by the derivative functions when the state leaves its validity
/// domain (non-positive airspeed, cos(theta) = 0, cos(beta) = 0). simulate()
/// catches it and returns a truncated, flagged trajectory.
class StateInvariantViolation : public std::runtime_error {
 public:
  explicit StateInvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

class TrimFailure : public std::runtime_error {
 public:
  TrimFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_norm(residual) {}
  double residual_norm;
};

/// Longitudinal state derivative at steady wing-level conditions
/// (beta = phi = p = r = 0). Throws StateInvariantViolation for V_T <= 0.
LonState lon_derivative(const LonState& state, double delta_e, const AeroDerivatives& derivs,
                        const AircraftConfig& config);

/// Full nine-state derivative; the p-dot/r-dot inertia coupling is resolved
/// by solving the 2x2 linear system. Throws StateInvariantViolation on
/// domain violations.
FullState full_derivative(const FullState& state, const ControlSurfaces& surfaces,
                          const AeroDerivatives& derivs, const AircraftConfig& config);

/// Classical fixed-step RK4 with the input held constant over the step.
LonState rk4_step(const LonState& state, double delta_e, const AeroDerivatives& derivs,
                  const AircraftConfig& config, double h);
FullState rk4_step(const FullState& state, const ControlSurfaces& surfaces,
                   const AeroDerivatives& derivs, const AircraftConfig& config, double h);

/// Generic RK4 update for a callable f(x) -> x_dot on Eigen vectors; used by
/// the sensitivity propagation and handy for convergence tests.
template <typename F, typename Vec>
Vec rk4_step_generic(F&& f, const Vec& x, double h) {
  const Vec k1 = f(x);
  const Vec k2 = f(Vec(x + 0.5 * h * k1));
  const Vec k3 = f(Vec(x + 0.5 * h * k2));
  const Vec k4 = f(Vec(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Trajectory {
  std::vector<double> time;
  std::vector<double> delta_e;   // rad, absolute deflection
  std::vector<LonState> states;
  bool aborted = false;
  std::size_t abort_index = 0;
  std::string abort_reason;

  std::size_t size() const { return states.size(); }
};

/// Integrates the longitudinal model over a uniform grid; states[k] is the
/// state at time k*T_s, inputs are piecewise constant per interval. On a
/// state-invariant violation the trajectory is truncated and flagged instead
/// of throwing.
Trajectory simulate(const LonState& x0, const std::vector<double>& delta_e,
                    double sample_period, const AeroDerivatives& derivs,
                    const AircraftConfig& config, int substeps = 1);

/// Solves the wing-level glide trim (alpha_e, theta_e, delta_e) at the given
/// airspeed by damped Newton iteration on (V_T-dot, alpha-dot, q-dot) = 0
/// with q = 0. Throws TrimFailure when the iteration does not converge.
TrimPoint trim(double trim_speed, const AeroDerivatives& derivs, const AircraftConfig& config,
               double tolerance = 1e-10, int max_iterations = 60);

/// Longitudinal LTI matrices assembled from the dimensional derivatives,
/// with gravity columns -g cos(theta_e) and -g sin(theta_e) exactly as the
/// textbook form prints them. See modal_analysis for the FD cross-check.
LinearModel linearize_lon(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                          const AircraftConfig& config);

/// Lateral LTI matrices with primed derivatives folding in J_xz. Throws
/// std::logic_error when the lateral derivative set is absent.
LinearModel linearize_lat(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                          const AircraftConfig& config);

/// Finite-difference Jacobian of the nonlinear longitudinal model at trim;
/// the ground-truth oracle for linearize_lon.
LinearModel linearize_lon_fd(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                             const AircraftConfig& config, double step = 1e-6);

/// Eigen-decomposition of the state matrix. Complex pairs are grouped into
/// oscillatory modes with omega_n = |lambda|, damping = -Re/|lambda|,
/// tau = 1/omega_n, overshoot = 100 exp(-pi d / sqrt(1-d^2)) and period
/// 2 pi / (omega_n sqrt(1-d^2)); real eigenvalues become aperiodic modes
/// with undefined (NaN) period and overshoot. For a four-state longitudinal
/// model the fast pair is labeled "Short-period" and the slow one "Phugoid".
ModeReport modal_analysis(const LinearModel& model);

/// Analytic Jacobians of lon_derivative with respect to the state and the
/// twelve longitudinal derivatives (parameter order of
/// AeroDerivatives::longitudinal()).
struct LonJacobians {
  Eigen::Vector4d f;                    // derivative itself
  Eigen::Matrix4d d_dx;                 // df/dx
  Eigen::Matrix<double, 4, 12> d_dp;    // df/dp
};
LonJacobians lon_jacobians(const LonState& state, double delta_e,
                           const AeroDerivatives& derivs, const AircraftConfig& config);

/// One RK4 update together with the exact Jacobians of the discrete map
/// (chain rule through the stages). Backbone of the sensitivity analysis
/// and the multiple-shooting estimator.
struct StepWithJacobians {
  LonState next;
  Eigen::Matrix4d d_dx;
  Eigen::Matrix<double, 4, 12> d_dp;
};
StepWithJacobians rk4_step_with_jacobians(const LonState& state, double delta_e,
                                          const AeroDerivatives& derivs,
                                          const AircraftConfig& config, double h,
                                          int substeps = 1);

}  // namespace awesid
