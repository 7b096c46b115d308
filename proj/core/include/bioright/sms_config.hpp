#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bioright/smsdyn.hpp"
#include "bioright/traj.hpp"

namespace bioright {

enum class SimMode { kPrescribed, kPd };
std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view text);

/// Surrogate reference: second-order step of `sweep` radians from the
/// initial joint angle.
struct ReferenceProfile {
  double overshoot = 13.85;   // percent
  double rise_time = 64.5;    // s, 10-90
  double duration = 225.0;    // s
  double sweep = -kSurrogateStep;  // rad
};

/// Everything a simulation run needs besides an optional reference file.
struct SimulationConfig {
  SmsParams params = ets7_params();
  PdGains gains;
  SimMode mode = SimMode::kPd;
  double dt = 0.01;
  double initial_base_angle = kSurrogateStep;   // rad
  double initial_joint_angle = kSurrogateStep;  // rad
  double momentum = 0.0;
  double rate_limit = 0.30 * kSurrogateStep / 180.0;  // rad/s
  std::optional<double> base_target;            // rad; default initial base angle
  ReferenceProfile reference;

  double target() const { return base_target.value_or(initial_base_angle); }
};

/// `key = value` lines; `#` starts a comment. `preset` (ets7, ets7_reduced,
/// lizard) replaces all mass properties and so should come first. Angles
/// are given in degrees. Throws kConfigError naming the line.
SimulationConfig parse_config(std::istream& in);
SimulationConfig load_config_file(const std::string& path);

/// Canonical `key = value` dump, readable by parse_config (angles round
/// trip through degrees).
void write_config(const SimulationConfig& cfg, std::ostream& out);

/// Reference from the config's surrogate profile, offset to the initial joint
/// angle, sampled at the config dt.
JointTrajectory surrogate_reference(const SimulationConfig& cfg);

/// Runs the configured mode against `reference` (absolute joint angles).
SmsTrajectory run_simulation(const SimulationConfig& cfg,
                             const JointTrajectory& reference);

}  // namespace bioright
