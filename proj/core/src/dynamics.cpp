#include "awesid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace awesid {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_lon_state(const LonState& s) {
  if (!(s.airspeed > 0.0))
    throw StateInvariantViolation("airspeed must be positive, got " +
                                  std::to_string(s.airspeed));
  if (!std::isfinite(s.airspeed) || !std::isfinite(s.alpha) || !std::isfinite(s.theta) ||
      !std::isfinite(s.q))
    throw StateInvariantViolation("non-finite longitudinal state");
}

}  // namespace

const Mode* ModeReport::find(const std::string& name) const {
  for (const Mode& m : modes)
    if (m.name == name) return &m;
  return nullptr;
}

LonState lon_derivative(const LonState& state, double delta_e, const AeroDerivatives& derivs,
                        const AircraftConfig& config) {
  check_lon_state(state);
  const AeroAngles angles{state.alpha, 0.0, state.airspeed};
  const BodyRates rates{0.0, state.q, 0.0};
  const ControlSurfaces surfaces{0.0, delta_e, 0.0};
  const AeroCoefficients c = coefficients(derivs, angles, rates, surfaces, config);
  const ForcesMoments fm = forces_moments(c, state.airspeed, config);
  const WindGravity g = gravity_wind_axes(angles, 0.0, state.theta, config.gravity);

  const double sa = std::sin(state.alpha), ca = std::cos(state.alpha);
  LonState dot;
  dot.airspeed = (fm.X * ca + fm.Z * sa) / config.mass + g.g_airspeed;
  dot.alpha = (fm.Z * ca - fm.X * sa) / (config.mass * state.airspeed) +
              g.g_alpha / state.airspeed + state.q;
  dot.theta = state.q;
  dot.q = fm.M / config.j_y;
  return dot;
}

FullState full_derivative(const FullState& state, const ControlSurfaces& surfaces,
                          const AeroDerivatives& derivs, const AircraftConfig& config) {
  if (!(state.airspeed > 0.0))
    throw StateInvariantViolation("airspeed must be positive");
  const double cb = std::cos(state.beta);
  const double cth = std::cos(state.theta);
  if (std::abs(cb) < 1e-12) throw StateInvariantViolation("cos(beta) = 0 singularity");
  if (std::abs(cth) < 1e-12) throw StateInvariantViolation("cos(theta) = 0 singularity");

  const AeroAngles angles{state.alpha, state.beta, state.airspeed};
  const BodyRates rates{state.p, state.q, state.r};
  const AeroCoefficients c = coefficients(derivs, angles, rates, surfaces, config);
  const ForcesMoments fm = forces_moments(c, state.airspeed, config);
  const WindGravity g = gravity_wind_axes(angles, state.phi, state.theta, config.gravity);

  const double sa = std::sin(state.alpha), ca = std::cos(state.alpha);
  const double sb = std::sin(state.beta);
  const double sphi = std::sin(state.phi), cphi = std::cos(state.phi);
  const double sth = std::sin(state.theta);
  const double tth = sth / cth;
  const double m = config.mass;
  const double v = state.airspeed;
  const double p = state.p, q = state.q, r = state.r;

  FullState dot;
  dot.airspeed = (fm.Y * sb + fm.X * ca * cb + fm.Z * cb * sa) / m + g.g_airspeed;
  dot.beta = (fm.Y * cb - fm.X * ca * sb - fm.Z * sa * sb) / (m * v) + g.g_beta / v -
             r * ca + p * sa;
  dot.alpha = (fm.Z * ca - fm.X * sa) / (m * v * cb) + g.g_alpha / (v * cb) +
              (q * cb - (p * ca + r * sa) * sb) / cb;
  dot.phi = p + r * cphi * tth + q * sphi * tth;
  dot.theta = q * cphi - r * sphi;
  dot.psi = (q * sphi + r * cphi) / cth;

  // p-dot and r-dot are coupled through J_xz; solve the 2x2 system
  //   [1, -Jxz/Jx; -Jxz/Jz, 1] [p_dot; r_dot] = [a_p; a_r].
  const double jx = config.j_x, jy = config.j_y, jz = config.j_z, jxz = config.j_xz;
  const double a_p = -q * r * (jz - jy) / jx + q * p * jxz / jx + fm.L / jx;
  const double a_r = -p * q * (jy - jx) / jz - q * r * jxz / jz + fm.N / jz;
  const double c1 = jxz / jx, c2 = jxz / jz;
  const double det = 1.0 - c1 * c2;
  dot.p = (a_p + c1 * a_r) / det;
  dot.r = (a_r + c2 * a_p) / det;
  dot.q = -p * r * (jx - jz) / jy - (p * p - r * r) * jxz / jy + fm.M / jy;
  return dot;
}

LonState rk4_step(const LonState& state, double delta_e, const AeroDerivatives& derivs,
                  const AircraftConfig& config, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_step: step size must be positive");
  auto f = [&](const Eigen::Vector4d& x) {
    return lon_derivative(LonState::from_vector(x), delta_e, derivs, config).vector();
  };
  return LonState::from_vector(rk4_step_generic(f, state.vector(), h));
}

FullState rk4_step(const FullState& state, const ControlSurfaces& surfaces,
                   const AeroDerivatives& derivs, const AircraftConfig& config, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_step: step size must be positive");
  using Vec9 = Eigen::Matrix<double, 9, 1>;
  auto pack = [](const FullState& s) {
    Vec9 v;
    v << s.airspeed, s.beta, s.alpha, s.phi, s.theta, s.psi, s.p, s.q, s.r;
    return v;
  };
  auto unpack = [](const Vec9& v) {
    return FullState{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
  };
  auto f = [&](const Vec9& v) { return pack(full_derivative(unpack(v), surfaces, derivs, config)); };
  return unpack(rk4_step_generic(f, pack(state), h));
}

Trajectory simulate(const LonState& x0, const std::vector<double>& delta_e,
                    double sample_period, const AeroDerivatives& derivs,
                    const AircraftConfig& config, int substeps) {
  if (!(sample_period > 0.0)) throw std::invalid_argument("simulate: sample period must be positive");
  if (substeps < 1) throw std::invalid_argument("simulate: substeps must be >= 1");
  if (delta_e.empty()) throw std::invalid_argument("simulate: empty input series");

  Trajectory traj;
  traj.time.reserve(delta_e.size());
  traj.delta_e = delta_e;
  traj.states.reserve(delta_e.size());

  const double h = sample_period / static_cast<double>(substeps);
  LonState x = x0;
  for (std::size_t k = 0; k < delta_e.size(); ++k) {
    traj.time.push_back(static_cast<double>(k) * sample_period);
    traj.states.push_back(x);
    if (k + 1 == delta_e.size()) break;
    try {
      for (int s = 0; s < substeps; ++s) x = rk4_step(x, delta_e[k], derivs, config, h);
    } catch (const StateInvariantViolation& e) {
      traj.aborted = true;
      traj.abort_index = k + 1;
      traj.abort_reason = e.what();
      traj.delta_e.resize(traj.states.size());
      return traj;
    }
  }
  return traj;
}

TrimPoint trim(double trim_speed, const AeroDerivatives& derivs, const AircraftConfig& config,
               double tolerance, int max_iterations) {
  if (!(trim_speed > 0.0)) throw std::invalid_argument("trim: speed must be positive");

  // Residual of (V_T-dot, alpha-dot, q-dot) in the unknowns (alpha, theta, delta_e).
  auto residual = [&](const Eigen::Vector3d& u) {
    const LonState s{trim_speed, u[0], u[1], 0.0};
    const LonState d = lon_derivative(s, u[2], derivs, config);
    return Eigen::Vector3d(d.airspeed, d.alpha, d.q);
  };

  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Vector3d res = residual(u);
  double res_norm = res.norm();

  for (int it = 0; it < max_iterations; ++it) {
    if (res_norm < tolerance) break;
    // Finite-difference Jacobian; the problem is 3x3 and cheap.
    Eigen::Matrix3d jac;
    const double fd = 1e-7;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d up = u, um = u;
      up[j] += fd;
      um[j] -= fd;
      jac.col(j) = (residual(up) - residual(um)) / (2.0 * fd);
    }
    const Eigen::Vector3d step = jac.fullPivLu().solve(-res);
    double alpha_ls = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Eigen::Vector3d cand = u + alpha_ls * step;
      Eigen::Vector3d cand_res;
      try {
        cand_res = residual(cand);
      } catch (const StateInvariantViolation&) {
        alpha_ls *= 0.5;
        continue;
      }
      if (cand_res.norm() < res_norm) {
        u = cand;
        res = cand_res;
        res_norm = res.norm();
        accepted = true;
        break;
      }
      alpha_ls *= 0.5;
    }
    if (!accepted) break;
  }

  if (!(res_norm < tolerance))
    throw TrimFailure("trim: Newton iteration did not converge, residual " +
                          std::to_string(res_norm),
                      res_norm);

  TrimPoint tp;
  tp.trim_speed = trim_speed;
  tp.alpha = u[0];
  tp.theta = u[1];
  tp.delta_e = u[2];
  tp.residual_norm = res_norm;
  return tp;
}

LinearModel linearize_lon(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                          const AircraftConfig& config) {
  const DimensionalDerivatives d = dimensionalize(derivs, trim_point.trim_speed, config);
  const double g = config.gravity;
  const double cth = std::cos(trim_point.theta), sth = std::sin(trim_point.theta);

  LinearModel model;
  model.A.resize(4, 4);
  model.A << d.X_v, d.X_alpha, -g * cth, d.X_q,
             d.Z_v, d.Z_alpha_over_v, -g * sth, d.Z_q,
             0.0, 0.0, 0.0, 1.0,
             d.M_v, d.M_alpha, 0.0, d.M_q;
  model.B.resize(4, 1);
  model.B << d.X_delta_e, d.Z_delta_e_over_v, 0.0, d.M_delta_e;
  model.state_names = {"V_T", "alpha", "theta", "q"};
  model.input_names = {"delta_e"};
  return model;
}

LinearModel linearize_lat(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                          const AircraftConfig& config) {
  if (!derivs.lateral)
    throw std::logic_error("linearize_lat: lateral derivative set not present");
  const LateralDerivatives& l = *derivs.lateral;
  const double v = trim_point.trim_speed;
  const double qbar = dynamic_pressure(v, config);
  const double s = config.wing_area, b = config.wing_span, m = config.mass;
  const double jx = config.j_x, jz = config.j_z, jxz = config.j_xz;
  const double g = config.gravity;
  const double cth = std::cos(trim_point.theta);
  const double tth = std::tan(trim_point.theta);

  const double y_beta = qbar * s / m * l.CY_beta;
  const double y_p = qbar * s * b / (2.0 * v * m) * l.CY_p;
  const double y_r = qbar * s * b / (2.0 * v * m) * l.CY_r;
  const double y_da = qbar * s / m * l.CY_delta_a;
  const double y_dr = qbar * s / m * l.CY_delta_r;
  const double l_beta = qbar * s * b / jx * l.Cl_beta;
  const double l_p = qbar * s * b * b / (2.0 * v * jx) * l.Cl_p;
  const double l_r = qbar * s * b * b / (2.0 * v * jx) * l.Cl_r;
  const double l_da = qbar * s * b / jx * l.Cl_delta_a;
  const double l_dr = qbar * s * b / jx * l.Cl_delta_r;
  const double n_beta = qbar * s * b / jz * l.Cn_beta;
  const double n_p = qbar * s * b * b / (2.0 * v * jz) * l.Cn_p;
  const double n_r = qbar * s * b * b / (2.0 * v * jz) * l.Cn_r;
  const double n_da = qbar * s * b / jz * l.Cn_delta_a;
  const double n_dr = qbar * s * b / jz * l.Cn_delta_r;

  // Primed derivatives fold the J_xz product of inertia into the L/N rows.
  const double denom = 1.0 - jxz * jxz / (jx * jz);
  auto l_prime = [&](double lv, double nv) { return (lv + jxz / jx * nv) / denom; };
  auto n_prime = [&](double nv, double lv) { return (nv + jxz / jz * lv) / denom; };

  LinearModel model;
  model.A.resize(4, 4);
  model.A << y_beta / v, g * cth, y_p, y_r - v,
             0.0, 0.0, 1.0, tth,
             l_prime(l_beta, n_beta), 0.0, l_prime(l_p, n_p), l_prime(l_r, n_r),
             n_prime(n_beta, l_beta), 0.0, n_prime(n_p, l_p), n_prime(n_r, l_r);
  model.B.resize(4, 2);
  model.B << y_da / v, y_dr / v,
             0.0, 0.0,
             l_prime(l_da, n_da), l_prime(l_dr, n_dr),
             n_prime(n_da, l_da), n_prime(n_dr, l_dr);
  model.state_names = {"beta", "phi", "p", "r"};
  model.input_names = {"delta_a", "delta_r"};
  return model;
}

LinearModel linearize_lon_fd(const TrimPoint& trim_point, const AeroDerivatives& derivs,
                             const AircraftConfig& config, double step) {
  const Eigen::Vector4d x0 = trim_point.state().vector();
  auto f = [&](const Eigen::Vector4d& x, double de) {
    return lon_derivative(LonState::from_vector(x), de, derivs, config).vector();
  };

  LinearModel model;
  model.A.resize(4, 4);
  for (int j = 0; j < 4; ++j) {
    // Relative step on the airspeed channel, absolute on angles and rate.
    const double h = (j == 0) ? step * std::max(1.0, std::abs(x0[0])) : step;
    Eigen::Vector4d xp = x0, xm = x0;
    xp[j] += h;
    xm[j] -= h;
    model.A.col(j) = (f(xp, trim_point.delta_e) - f(xm, trim_point.delta_e)) / (2.0 * h);
  }
  model.B.resize(4, 1);
  model.B = (f(x0, trim_point.delta_e + step) - f(x0, trim_point.delta_e - step)) / (2.0 * step);
  model.state_names = {"V_T", "alpha", "theta", "q"};
  model.input_names = {"delta_e"};
  return model;
}

ModeReport modal_analysis(const LinearModel& model) {
  if (model.A.rows() != model.A.cols())
    throw std::invalid_argument("modal_analysis: state matrix must be square");

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(model.A);
  const auto eigenvalues = solver.eigenvalues();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Mode> modes;
  std::vector<bool> used(eigenvalues.size(), false);
  const double imag_tol = 1e-9 * std::max(1.0, model.A.norm());

  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (used[i]) continue;
    const std::complex<double> lambda = eigenvalues[i];
    Mode mode;
    mode.eigenvalue = lambda;
    if (std::abs(lambda.imag()) > imag_tol) {
      // Mark the conjugate partner as consumed.
      for (Eigen::Index j = i + 1; j < eigenvalues.size(); ++j) {
        if (!used[j] && std::abs(eigenvalues[j].real() - lambda.real()) <= imag_tol &&
            std::abs(eigenvalues[j].imag() + lambda.imag()) <= imag_tol) {
          used[j] = true;
          break;
        }
      }
      mode.oscillatory = true;
      mode.omega_n = std::abs(lambda);
      mode.damping = -lambda.real() / mode.omega_n;
      mode.tau = 1.0 / mode.omega_n;
      if (mode.damping < 1.0) {
        const double root = std::sqrt(1.0 - mode.damping * mode.damping);
        mode.overshoot_pct = 100.0 * std::exp(-kPi * mode.damping / root);
        mode.period = 2.0 * kPi / (mode.omega_n * root);
      } else {
        mode.overshoot_pct = 0.0;
        mode.period = nan;
      }
    } else {
      mode.oscillatory = false;
      mode.omega_n = std::abs(lambda.real());
      mode.damping = mode.omega_n > 0.0 ? -lambda.real() / mode.omega_n : 0.0;
      mode.tau = mode.omega_n > 0.0 ? 1.0 / mode.omega_n : nan;
      mode.overshoot_pct = nan;
      mode.period = nan;
    }
    used[i] = true;
    modes.push_back(mode);
  }

  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.omega_n > b.omega_n; });

  const bool longitudinal =
      !model.state_names.empty() && model.state_names.front() == "V_T" && model.A.rows() == 4;
  const bool lateral =
      !model.state_names.empty() && model.state_names.front() == "beta" && model.A.rows() == 4;

  std::size_t oscillatory_count = 0;
  for (const Mode& m : modes) oscillatory_count += m.oscillatory ? 1 : 0;

  if (longitudinal && oscillatory_count == 2) {
    std::size_t seen = 0;
    for (Mode& m : modes) {
      if (!m.oscillatory) continue;
      m.name = (seen++ == 0) ? "Short-period" : "Phugoid";
    }
  } else if (lateral && oscillatory_count == 1) {
    std::size_t real_seen = 0;
    for (Mode& m : modes) {
      if (m.oscillatory)
        m.name = "Dutch roll";
      else
        m.name = (real_seen++ == 0) ? "Roll subsidence" : "Spiral";
    }
  }
  std::size_t index = 1;
  for (Mode& m : modes) {
    if (m.name.empty()) {
      std::ostringstream oss;
      oss << (m.oscillatory ? "Mode " : "Aperiodic ") << index;
      m.name = oss.str();
    }
    ++index;
  }

  return ModeReport{std::move(modes)};
}

LonJacobians lon_jacobians(const LonState& state, double delta_e,
                           const AeroDerivatives& derivs, const AircraftConfig& config) {
  check_lon_state(state);
  const double v = state.airspeed, alpha = state.alpha, theta = state.theta, q = state.q;
  const double rho = config.air_density, s = config.wing_area, c = config.chord;
  const double m = config.mass, jy = config.j_y, g = config.gravity;

  const double qbar = 0.5 * rho * v * v;
  const double qs = qbar * s;
  const double qhat = c * q / (2.0 * v);
  const double dqhat_dv = -c * q / (2.0 * v * v);
  const double dqhat_dq = c / (2.0 * v);

  const double cx = derivs.CX_alpha * alpha + derivs.CX_q * qhat +
                    derivs.CX_delta_e * delta_e + derivs.CX_0;
  const double cz = derivs.CZ_alpha * alpha + derivs.CZ_q * qhat +
                    derivs.CZ_delta_e * delta_e + derivs.CZ_0;
  const double cm = derivs.Cm_alpha * alpha + derivs.Cm_q * qhat +
                    derivs.Cm_delta_e * delta_e + derivs.Cm_0;
  const double fx = qs * cx, fz = qs * cz, fm = qs * c * cm;

  const double dx_dv = rho * v * s * cx + qs * derivs.CX_q * dqhat_dv;
  const double dz_dv = rho * v * s * cz + qs * derivs.CZ_q * dqhat_dv;
  const double dm_dv = rho * v * s * c * cm + qs * c * derivs.Cm_q * dqhat_dv;
  const double dx_da = qs * derivs.CX_alpha;
  const double dz_da = qs * derivs.CZ_alpha;
  const double dm_da = qs * c * derivs.Cm_alpha;
  const double dx_dq = qs * derivs.CX_q * dqhat_dq;
  const double dz_dq = qs * derivs.CZ_q * dqhat_dq;
  const double dm_dq = qs * c * derivs.Cm_q * dqhat_dq;

  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double g_vt = g * (-ca * std::sin(theta) + sa * std::cos(theta));
  const double g_al = g * (sa * std::sin(theta) + ca * std::cos(theta));

  LonJacobians out;
  out.f << (fx * ca + fz * sa) / m + g_vt,
      (fz * ca - fx * sa) / (m * v) + g_al / v + q,
      q,
      fm / jy;

  Eigen::Matrix4d& a = out.d_dx;
  a.setZero();
  // V_T-dot row
  a(0, 0) = (dx_dv * ca + dz_dv * sa) / m;
  a(0, 1) = (dx_da * ca - fx * sa + dz_da * sa + fz * ca) / m + g_al;
  a(0, 2) = -g_al;
  a(0, 3) = (dx_dq * ca + dz_dq * sa) / m;
  // alpha-dot row
  const double num2 = fz * ca - fx * sa;
  a(1, 0) = (dz_dv * ca - dx_dv * sa) / (m * v) - num2 / (m * v * v) - g_al / (v * v);
  a(1, 1) = (dz_da * ca - fz * sa - dx_da * sa - fx * ca) / (m * v) - g_vt / v;
  a(1, 2) = g_vt / v;
  a(1, 3) = (dz_dq * ca - dx_dq * sa) / (m * v) + 1.0;
  // theta-dot row
  a(2, 3) = 1.0;
  // q-dot row
  a(3, 0) = dm_dv / jy;
  a(3, 1) = dm_da / jy;
  a(3, 3) = dm_dq / jy;

  // Parameter Jacobian: regressor (1, alpha, q_hat, delta_e) per axis group.
  const double reg[4] = {1.0, alpha, qhat, delta_e};
  out.d_dp.setZero();
  for (int j = 0; j < 4; ++j) {
    const double x_term = qs * reg[j];
    out.d_dp(0, j) = x_term * ca / m;             // CX group -> V_T-dot
    out.d_dp(1, j) = -x_term * sa / (m * v);      //           -> alpha-dot
    out.d_dp(0, 4 + j) = x_term * sa / m;         // CZ group
    out.d_dp(1, 4 + j) = x_term * ca / (m * v);
    out.d_dp(3, 8 + j) = qs * c * reg[j] / jy;    // Cm group -> q-dot
  }
  return out;
}

StepWithJacobians rk4_step_with_jacobians(const LonState& state, double delta_e,
                                          const AeroDerivatives& derivs,
                                          const AircraftConfig& config, double h,
                                          int substeps) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_step_with_jacobians: h must be positive");
  if (substeps < 1) throw std::invalid_argument("rk4_step_with_jacobians: substeps must be >= 1");

  using Mat4 = Eigen::Matrix4d;
  using Mat4x12 = Eigen::Matrix<double, 4, 12>;

  const double hs = h / static_cast<double>(substeps);
  Eigen::Vector4d x = state.vector();
  Mat4 total_dx = Mat4::Identity();
  Mat4x12 total_dp = Mat4x12::Zero();

  for (int step = 0; step < substeps; ++step) {
    const LonJacobians j1 = lon_jacobians(LonState::from_vector(x), delta_e, derivs, config);
    const Eigen::Vector4d k1 = j1.f;
    const Mat4 k1x = j1.d_dx;
    const Mat4x12 k1p = j1.d_dp;

    const Eigen::Vector4d x2 = x + 0.5 * hs * k1;
    const LonJacobians j2 = lon_jacobians(LonState::from_vector(x2), delta_e, derivs, config);
    const Eigen::Vector4d k2 = j2.f;
    const Mat4 k2x = j2.d_dx * (Mat4::Identity() + 0.5 * hs * k1x);
    const Mat4x12 k2p = j2.d_dx * (0.5 * hs * k1p) + j2.d_dp;

    const Eigen::Vector4d x3 = x + 0.5 * hs * k2;
    const LonJacobians j3 = lon_jacobians(LonState::from_vector(x3), delta_e, derivs, config);
    const Eigen::Vector4d k3 = j3.f;
    const Mat4 k3x = j3.d_dx * (Mat4::Identity() + 0.5 * hs * k2x);
    const Mat4x12 k3p = j3.d_dx * (0.5 * hs * k2p) + j3.d_dp;

    const Eigen::Vector4d x4 = x + hs * k3;
    const LonJacobians j4 = lon_jacobians(LonState::from_vector(x4), delta_e, derivs, config);
    const Eigen::Vector4d k4 = j4.f;
    const Mat4 k4x = j4.d_dx * (Mat4::Identity() + hs * k3x);
    const Mat4x12 k4p = j4.d_dx * (hs * k3p) + j4.d_dp;

    x += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Mat4 step_dx = Mat4::Identity() + (hs / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const Mat4x12 step_dp = (hs / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    total_dp = step_dx * total_dp + step_dp;
    total_dx = step_dx * total_dx;
  }

  StepWithJacobians out;
  out.next = LonState::from_vector(x);
  out.d_dx = total_dx;
  out.d_dp = total_dp;
  return out;
}

}  // namespace awesid
