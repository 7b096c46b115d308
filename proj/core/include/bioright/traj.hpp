#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace bioright {

/// Angle history on a uniform time grid. Angles in radians, rates in rad/s.
struct JointTrajectory {
  std::vector<double> times;
  std::vector<double> angle;
  std::optional<std::vector<double>> rate;

  std::size_t size() const { return times.size(); }
  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
  double step() const;
  /// Throws kInvalidArgument unless the grid is uniform (1e-9 relative to
  /// the step), sizes agree and angles are finite.
  void validate() const;

  /// Linear interpolation, clamped at the ends.
  double angle_at(double t) const;
  double rate_at(double t) const;
};

JointTrajectory make_trajectory(std::vector<double> times,
                                std::vector<double> angle);

/// Central differences inside, second-order one-sided differences at the
/// ends. Needs at least 3 samples.
JointTrajectory differentiate(const JointTrajectory& traj);

/// Centered moving average of odd width; windows shrink symmetrically near
/// the ends.
JointTrajectory smooth(const JointTrajectory& traj, int window);

/// Stretches time by k = target / duration (snapped to an integer when
/// within 1e-9 relative); rates are divided by k.
JointTrajectory time_scale(const JointTrajectory& traj, double target_duration);
double time_scale_factor(const JointTrajectory& traj, double target_duration);

/// Linear interpolation onto t0 + i*dt covering the same interval.
JointTrajectory resample(const JointTrajectory& traj, double dt);

enum class RiseConvention { kTenToNinety, kZeroToHundred };
std::string_view to_string(RiseConvention convention);

struct StepResponseMetrics {
  double rise_time = 0.0;      // s
  double settling_time = 0.0;  // s since the first sample
  double overshoot = 0.0;      // percent of the step
  double initial_value = 0.0;  // rad
  double final_value = 0.0;    // rad
  double steady_assumed_at = 0.0;  // s since the first sample
  double settle_band = 0.05;
  RiseConvention convention = RiseConvention::kTenToNinety;
};

/// Final value is the (interpolated) angle at `steady_time`; initial value
/// is the first sample. Crossings are located by linear interpolation
/// between samples; settling uses last-exit semantics.
StepResponseMetrics step_metrics(
    const JointTrajectory& traj, double steady_time, double settle_band = 0.05,
    RiseConvention convention = RiseConvention::kTenToNinety);

/// key=value lines.
void write_metrics_text(const StepResponseMetrics& m, std::ostream& out);
void write_metrics_json(const StepResponseMetrics& m, std::ostream& out);

struct SecondOrderFit {
  JointTrajectory trajectory;
  double damping_ratio = 0.0;
  double natural_frequency = 0.0;  // rad/s
  double amplitude = 0.0;          // rad; scales the unit response
  double overshoot = 0.0;          // percent, against the value at `duration`
  double rise_time = 0.0;          // s, same convention as requested
};

inline constexpr double kSurrogateStep = 3.14159265358979323846;  // 180 deg

/// Underdamped unit-step response a * (1 - e^{-z w t}(cos wd t + z/sqrt(1-z^2)
/// sin wd t)) sampled on [0, duration], with (z, w) solved so that the
/// overshoot and rise time measured against the value at `duration` equal
/// the requested ones, and a chosen so that value is exactly `step`.
/// The trajectory carries the analytic rate.
SecondOrderFit synth_second_order(
    double overshoot_percent, double rise_time, double duration, double dt,
    RiseConvention convention = RiseConvention::kTenToNinety,
    double step = kSurrogateStep);

/// Closed-form unit-step response and its derivative.
double second_order_response(double zeta, double wn, double t);
double second_order_rate(double zeta, double wn, double t);
/// Damping ratio giving `overshoot_percent` for an infinite horizon.
double damping_from_overshoot(double overshoot_percent);

/// `t,angle_deg,rate_deg_s`.
void write_trajectory_csv(const JointTrajectory& traj, std::ostream& out);
JointTrajectory read_trajectory_csv(std::istream& in);

}  // namespace bioright
