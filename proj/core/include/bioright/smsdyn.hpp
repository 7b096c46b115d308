#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "bioright/traj.hpp"

namespace bioright {

/// Coaxial: both centers of mass on the rotation axis, so the coupling is a
/// pure inertia exchange. PlanarOffset: base CM -> hinge (r_h) and hinge ->
/// arm CM (d) offsets in the rotation plane.
enum class SmsMode { kCoaxial, kPlanarOffset };

struct SmsParams {
  double base_mass = 0.0;       // kg
  double arm_mass = 0.0;        // kg
  double base_inertia = 0.0;    // kg m^2 about the rotation axis
  double arm_inertia_cm = 0.0;  // kg m^2 about the arm CM (effective in Coaxial)
  double hinge_offset = 0.0;    // m
  double arm_cm_offset = 0.0;   // m
  SmsMode mode = SmsMode::kCoaxial;

  /// Throws kInvalidArgument on violated invariants.
  void validate() const;
  double reduced_mass() const;
};

/// Simplified ETS-VII (roll axis, arm axis aligned with it).
SmsParams ets7_params();
/// Same with the base inertia divided by 20.
SmsParams ets7_reduced_base_params();
/// Lizard body/tail values.
SmsParams lizard_params();

/// Ratio printed in the published comparison for ETS-VII; the raw
/// parameters give 360 / 6200 = 0.0581.
inline constexpr double kPublishedEts7InertiaRatio = 0.056;
inline constexpr double kPublishedReducedInertiaRatio = 0.86;
inline constexpr double kPublishedLizardInertiaRatio = 0.8;

struct SmsState {
  double base_angle = 0.0;   // phi, rad
  double joint_angle = 0.0;  // theta, rad
  double base_rate = 0.0;    // rad/s
  double joint_rate = 0.0;   // rad/s
  double t = 0.0;            // s
};

struct PdGains {
  double kp = 2000.0;          // N m / rad
  double kd = 20000.0;         // N m s / rad
  double torque_limit = 50.0;  // N m

  void validate() const;
};

struct SmsSample {
  SmsState state;
  double torque = 0.0;    // joint torque, N m
  double momentum = 0.0;  // kg m^2 / s
};

struct SmsTrajectory {
  std::vector<SmsSample> samples;
  bool has_torque = true;
  std::vector<double> tracking_error;  // theta_ref - theta, PD runs only

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return samples.empty() ? 0.0 : samples.back().state.t - samples.front().state.t;
  }
};

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

Mat2 mass_matrix(const SmsParams& p, double joint_angle);
/// Coriolis/centrifugal generalized forces C(q, qdot) qdot.
Vec2 coriolis(const SmsParams& p, double joint_angle, double base_rate,
              double joint_rate);
double angular_momentum(const SmsParams& p, const SmsState& s);
double kinetic_energy(const SmsParams& p, const SmsState& s);

/// Generalized accelerations for base torque 0 and the given joint torque.
Vec2 accelerations(const SmsParams& p, const SmsState& s, double joint_torque);

/// One classical RK4 step with the joint torque held over the step.
SmsState step_rk4(const SmsParams& p, const SmsState& s, double joint_torque,
                  double dt);

/// Free drift with zero joint torque.
SmsTrajectory simulate_unforced(const SmsParams& p, const SmsState& initial,
                                double duration, double dt);

/// Kinematic playback: theta and theta_dot come from `joint_traj` (which
/// must carry rates); the base rate follows from the momentum L0 and the
/// base angle is integrated with the trapezoid rule. The joint torque is
/// reconstructed from the equations of motion.
SmsTrajectory simulate_prescribed(const SmsParams& p,
                                  const JointTrajectory& joint_traj,
                                  double initial_base_angle = 0.0,
                                  double momentum = 0.0);

struct PdOptions {
  double dt = 0.01;
  std::optional<double> initial_joint_angle;  // default: reference start
  double initial_base_angle = 0.0;
  double initial_base_rate = 0.0;
  double initial_joint_rate = 0.0;
};

inline constexpr double kDivergenceBound = 1e6;

/// PD tracking of `joint_ref` over its span with the saturated torque
/// clamp(kp (theta_ref - theta) + kd (rate_ref - rate), +-limit).
SmsTrajectory simulate_pd(const SmsParams& p, const JointTrajectory& joint_ref,
                          const PdGains& gains, const PdOptions& options = {});

/// Coaxial closed form: dphi = -(I_a / (I_b + I_a)) dtheta.
double base_reaction_estimate(const SmsParams& p, double joint_change);

/// Arm (or tail) effective inertia over base (or body) inertia.
double inertia_ratio(const SmsParams& p);
double mass_ratio(const SmsParams& p);

struct SmsSummary {
  double base_excursion = 0.0;     // max |phi - phi0|, rad
  double base_change = 0.0;        // phi(T) - phi0, rad
  double peak_base_rate = 0.0;     // rad/s
  double peak_joint_rate = 0.0;    // rad/s
  double joint_change = 0.0;       // theta(T) - theta0, rad
  double final_tracking_error = 0.0;  // rad, PD only
  double momentum_drift = 0.0;     // |L - L0| / max(|L0|, 1e-6), max over run
  double peak_torque = 0.0;        // N m
  /// max |L - L0| over max(|L0|, max(|M11 phi_dot| + |M12 theta_dot|)):
  /// roundoff relative to the momentum being exchanged.
  double momentum_residual = 0.0;
};

SmsSummary summarize(const SmsParams& p, const SmsTrajectory& traj);

/// `t,phi_deg,theta_deg,phi_rate_deg_s,theta_rate_deg_s,tau_Nm,L`.
void write_sms_csv(const SmsTrajectory& traj, std::ostream& out);

}  // namespace bioright
