#include "bioright/smsdyn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

void SmsParams::validate() const {
  if (!(base_mass > 0.0 && arm_mass > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "masses must be positive");
  }
  if (!(base_inertia >= 0.0 && arm_inertia_cm >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "inertias must be non-negative");
  }
  if (!(hinge_offset >= 0.0 && arm_cm_offset >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "offsets must be non-negative");
  }
  if (mode == SmsMode::kCoaxial && (hinge_offset != 0.0 || arm_cm_offset != 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "coaxial mode requires zero offsets");
  }
}

double SmsParams::reduced_mass() const {
  return base_mass * arm_mass / (base_mass + arm_mass);
}

SmsParams ets7_params() {
  SmsParams p;
  p.base_mass = 2550.0;
  p.arm_mass = 140.4;
  p.base_inertia = 6200.0;
  p.arm_inertia_cm = 360.0;
  p.mode = SmsMode::kCoaxial;
  return p;
}

SmsParams ets7_reduced_base_params() {
  SmsParams p = ets7_params();
  p.base_inertia /= 20.0;
  return p;
}

SmsParams lizard_params() {
  SmsParams p;
  p.base_mass = 2.9e-3;
  p.arm_mass = 0.29e-3;
  p.base_inertia = 6.6e-8;
  p.arm_inertia_cm = 5.29e-8;
  p.mode = SmsMode::kCoaxial;
  return p;
}

void PdGains::validate() const {
  if (!(kp >= 0.0 && kd >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "PD gains must be non-negative");
  }
  if (!(torque_limit > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "torque limit must be positive");
  }
}

Mat2 mass_matrix(const SmsParams& p, double theta) {
  const double ia = p.arm_inertia_cm;
  Mat2 m;
  if (p.mode == SmsMode::kCoaxial) {
    m << p.base_inertia + ia, ia,
         ia, ia;
    return m;
  }
  const double mu = p.reduced_mass();
  const double rh = p.hinge_offset, d = p.arm_cm_offset;
  const double c = std::cos(theta);
  const double m11 = p.base_inertia + ia + mu * (rh * rh + d * d + 2.0 * rh * d * c);
  const double m12 = ia + mu * (d * d + rh * d * c);
  const double m22 = ia + mu * d * d;
  m << m11, m12,
       m12, m22;
  return m;
}

Vec2 coriolis(const SmsParams& p, double theta, double phi_dot, double theta_dot) {
  if (p.mode == SmsMode::kCoaxial) return Vec2::Zero();
  const double h = -p.reduced_mass() * p.hinge_offset * p.arm_cm_offset * std::sin(theta);
  return {h * theta_dot * phi_dot + h * (phi_dot + theta_dot) * theta_dot,
          -h * phi_dot * phi_dot};
}

double angular_momentum(const SmsParams& p, const SmsState& s) {
  const Mat2 m = mass_matrix(p, s.joint_angle);
  return m(0, 0) * s.base_rate + m(0, 1) * s.joint_rate;
}

double kinetic_energy(const SmsParams& p, const SmsState& s) {
  const Vec2 qd(s.base_rate, s.joint_rate);
  return 0.5 * qd.dot(mass_matrix(p, s.joint_angle) * qd);
}

Vec2 accelerations(const SmsParams& p, const SmsState& s, double joint_torque) {
  const Mat2 m = mass_matrix(p, s.joint_angle);
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-12 * m.cwiseAbs().maxCoeff() * m.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kSingularMass, "mass matrix is singular");
  }
  const Vec2 rhs = Vec2(0.0, joint_torque) -
                   coriolis(p, s.joint_angle, s.base_rate, s.joint_rate);
  // Explicit 2x2 inverse.
  return Vec2(m(1, 1) * rhs(0) - m(0, 1) * rhs(1),
              -m(1, 0) * rhs(0) + m(0, 0) * rhs(1)) / det;
}

SmsState step_rk4(const SmsParams& p, const SmsState& s, double tau, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  using Vec4 = Eigen::Vector4d;  // phi, theta, phi_dot, theta_dot
  auto deriv = [&](const Vec4& x) {
    SmsState st{x(0), x(1), x(2), x(3), 0.0};
    const Vec2 qdd = accelerations(p, st, tau);
    return Vec4(x(2), x(3), qdd(0), qdd(1));
  };
  const Vec4 x0(s.base_angle, s.joint_angle, s.base_rate, s.joint_rate);
  const Vec4 k1 = deriv(x0);
  const Vec4 k2 = deriv(x0 + 0.5 * dt * k1);
  const Vec4 k3 = deriv(x0 + 0.5 * dt * k2);
  const Vec4 k4 = deriv(x0 + dt * k3);
  const Vec4 x1 = x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {x1(0), x1(1), x1(2), x1(3), s.t + dt};
}

SmsTrajectory simulate_unforced(const SmsParams& p, const SmsState& initial,
                                double duration, double dt) {
  p.validate();
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  SmsTrajectory out;
  out.samples.reserve(steps + 1);
  SmsState s = initial;
  for (std::size_t k = 0;; ++k) {
    out.samples.push_back({s, 0.0, angular_momentum(p, s)});
    if (k == steps) break;
    s = step_rk4(p, s, 0.0, dt);
    s.t = initial.t + static_cast<double>(k + 1) * dt;
  }
  return out;
}

SmsTrajectory simulate_prescribed(const SmsParams& p, const JointTrajectory& jt,
                                  double initial_base_angle, double momentum) {
  p.validate();
  jt.validate();
  if (!jt.rate) {
    throw Error(ErrorCode::kInvalidArgument, "prescribed playback needs joint rates");
  }
  if (!std::isfinite(momentum)) {
    throw Error(ErrorCode::kInvalidArgument, "momentum must be finite");
  }
  const std::size_t n = jt.size();
  const auto& theta = jt.angle;
  const auto& theta_dot = *jt.rate;

  // Joint acceleration from the rate series.
  std::vector<double> theta_ddot(n, 0.0);
  if (n >= 3) {
    JointTrajectory rate_traj{jt.times, theta_dot, std::nullopt};
    theta_ddot = *differentiate(rate_traj).rate;
  }
  const double h = jt.step();

  SmsTrajectory out;
  out.samples.reserve(n);
  double phi = initial_base_angle;
  double prev_phi_dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat2 m = mass_matrix(p, theta[i]);
    const double phi_dot = (momentum - m(0, 1) * theta_dot[i]) / m(0, 0);
    if (i > 0) phi += 0.5 * (prev_phi_dot + phi_dot) * h;
    prev_phi_dot = phi_dot;

    const Vec2 c = coriolis(p, theta[i], phi_dot, theta_dot[i]);
    const double phi_ddot = -(m(0, 1) * theta_ddot[i] + c(0)) / m(0, 0);
    const double tau = m(1, 0) * phi_ddot + m(1, 1) * theta_ddot[i] + c(1);

    SmsSample sample;
    sample.state = {phi, theta[i], phi_dot, theta_dot[i], jt.times[i]};
    sample.torque = tau;
    sample.momentum = angular_momentum(p, sample.state);
    out.samples.push_back(sample);
  }
  return out;
}

SmsTrajectory simulate_pd(const SmsParams& p, const JointTrajectory& ref,
                          const PdGains& g, const PdOptions& opt) {
  p.validate();
  g.validate();
  ref.validate();
  if (!(opt.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  const JointTrajectory reference =
      ref.rate ? ref : (ref.size() >= 3 ? differentiate(ref) : ref);
  auto ref_rate = [&](double t) { return reference.rate ? reference.rate_at(t) : 0.0; };

  const double t0 = ref.times.front();
  const auto steps = static_cast<std::size_t>(std::llround(ref.duration() / opt.dt));
  SmsState s;
  s.base_angle = opt.initial_base_angle;
  s.joint_angle = opt.initial_joint_angle.value_or(reference.angle.front());
  s.base_rate = opt.initial_base_rate;
  s.joint_rate = opt.initial_joint_rate;
  s.t = t0;

  SmsTrajectory out;
  out.samples.reserve(steps + 1);
  out.tracking_error.reserve(steps + 1);
  for (std::size_t k = 0;; ++k) {
    const double err = reference.angle_at(s.t) - s.joint_angle;
    const double err_rate = ref_rate(s.t) - s.joint_rate;
    const double tau = std::clamp(g.kp * err + g.kd * err_rate, -g.torque_limit,
                                  g.torque_limit);
    out.samples.push_back({s, tau, angular_momentum(p, s)});
    out.tracking_error.push_back(err);
    if (k == steps) break;

    s = step_rk4(p, s, tau, opt.dt);
    s.t = t0 + static_cast<double>(k + 1) * opt.dt;
    if (!(std::abs(s.base_angle) < kDivergenceBound &&
          std::abs(s.joint_angle) < kDivergenceBound &&
          std::abs(s.base_rate) < kDivergenceBound &&
          std::abs(s.joint_rate) < kDivergenceBound)) {
      throw Error(ErrorCode::kDiverged,
                  "state exceeded 1e6 at t=" + format_fixed(s.t, 3) + " s");
    }
  }
  return out;
}

double base_reaction_estimate(const SmsParams& p, double joint_change) {
  p.validate();
  if (p.mode != SmsMode::kCoaxial) {
    throw Error(ErrorCode::kModeUnsupported,
                "closed-form base reaction holds only in coaxial mode");
  }
  return -(p.arm_inertia_cm / (p.base_inertia + p.arm_inertia_cm)) * joint_change;
}

double inertia_ratio(const SmsParams& p) {
  p.validate();
  if (!(p.base_inertia > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "base inertia must be positive");
  }
  double arm = p.arm_inertia_cm;
  if (p.mode == SmsMode::kPlanarOffset) {
    // Arm inertia about the hinge through its CM offset.
    arm += p.reduced_mass() * p.arm_cm_offset * p.arm_cm_offset;
  }
  return arm / p.base_inertia;
}

double mass_ratio(const SmsParams& p) {
  p.validate();
  return p.arm_mass / p.base_mass;
}

SmsSummary summarize(const SmsParams& p, const SmsTrajectory& traj) {
  SmsSummary s;
  if (traj.samples.empty()) return s;
  const auto& first = traj.samples.front();
  const double l0 = first.momentum;
  for (const auto& x : traj.samples) {
    s.base_excursion = std::max(s.base_excursion,
                                std::abs(x.state.base_angle - first.state.base_angle));
    s.peak_base_rate = std::max(s.peak_base_rate, std::abs(x.state.base_rate));
    s.peak_joint_rate = std::max(s.peak_joint_rate, std::abs(x.state.joint_rate));
    s.peak_torque = std::max(s.peak_torque, std::abs(x.torque));
    s.momentum_drift = std::max(s.momentum_drift, std::abs(x.momentum - l0));
  }
  double exchanged = 0.0;
  for (const auto& x : traj.samples) {
    const Mat2 m = mass_matrix(p, x.state.joint_angle);
    exchanged = std::max(exchanged, std::abs(m(0, 0) * x.state.base_rate) +
                                        std::abs(m(0, 1) * x.state.joint_rate));
  }
  const double scale = std::max(std::abs(l0), exchanged);
  s.momentum_residual = scale > 0.0 ? s.momentum_drift / scale : 0.0;
  s.momentum_drift /= std::max(std::abs(l0), 1e-6);
  const auto& last = traj.samples.back();
  s.base_change = last.state.base_angle - first.state.base_angle;
  s.joint_change = last.state.joint_angle - first.state.joint_angle;
  if (!traj.tracking_error.empty()) s.final_tracking_error = traj.tracking_error.back();
  return s;
}

void write_sms_csv(const SmsTrajectory& traj, std::ostream& out) {
  out << "t,phi_deg,theta_deg,phi_rate_deg_s,theta_rate_deg_s,tau_Nm,L\n";
  for (const auto& x : traj.samples) {
    out << format_fixed(x.state.t, 4) << ','
        << format_fixed(rad2deg(x.state.base_angle), 6) << ','
        << format_fixed(rad2deg(x.state.joint_angle), 6) << ','
        << format_fixed(rad2deg(x.state.base_rate), 6) << ','
        << format_fixed(rad2deg(x.state.joint_rate), 6) << ','
        << format_fixed(x.torque, 6) << ',' << format_shortest(x.momentum) << '\n';
  }
}

}  // namespace bioright
