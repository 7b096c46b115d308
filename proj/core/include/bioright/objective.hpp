#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "bioright/smsdyn.hpp"

namespace bioright {

struct SimulationConfig;

struct ObjectiveWeights {
  double safety = 0.0;
  double stability = 0.0;
  double efficiency = 0.0;

  /// Throws kInvalidArgument on negative or all-zero weights.
  void validate() const;
  ObjectiveWeights normalized() const;
};

struct ObjectiveContext {
  double rate_limit = 0.30 * 3.14159265358979323846 / 180.0;  // rad/s
  double base_target = 0.0;                                    // rad
  double torque_limit = 50.0;                                  // N m
};

struct Functionals {
  double safety = 0.0;
  double stability = 0.0;
  double efficiency = 0.0;
};

/// peak |phi_dot| / rate_limit.
double phi_safety(const SmsTrajectory& traj, double rate_limit);
/// |phi(T) - target| / pi + mean|phi_dot| / peak|phi_dot| (second term 0
/// when the base never moves).
double phi_stability(const SmsTrajectory& traj, double base_target);
/// Integral of tau^2 over (torque_limit^2 T). Throws kMissingTorque.
double phi_efficiency(const SmsTrajectory& traj, double torque_limit);

Functionals evaluate_functionals(const SmsTrajectory& traj, const ObjectiveContext& ctx);
double combine(const ObjectiveWeights& w, const Functionals& f);

struct Evaluation {
  Functionals functionals;
  double cost = 0.0;
};
Evaluation evaluate(const ObjectiveWeights& w, const SmsTrajectory& traj,
                    const ObjectiveContext& ctx);

/// Definition strings embedded in report headers.
inline constexpr std::array<std::string_view, 3> kFunctionalDefinitions = {
    "phi_safety = peak|phi_rate| / rate_limit",
    "phi_stability = |phi(T) - phi_target| / pi + mean|phi_rate| / peak|phi_rate|",
    "phi_efficiency = integral(tau^2 dt) / (torque_limit^2 * T)",
};

struct ObjectiveRow {
  ObjectiveWeights weights;
  Functionals functionals;
  double cost = 0.0;
};

struct ObjectiveReport {
  std::vector<ObjectiveRow> rows;
  std::size_t argmin = 0;  // first minimal row

  const ObjectiveRow& best() const { return rows.at(argmin); }
};

/// Simplex points {i/n, j/n, (n-i-j)/n}, lexicographic in (w_safety,
/// w_stability). Yields C(n+2, 2) rows.
std::vector<ObjectiveWeights> simplex_grid(int resolution);
std::size_t simplex_count(int resolution);

/// Sweep over fixed functionals (the trajectory does not depend on w).
ObjectiveReport weight_sweep(int resolution, const Functionals& f);
/// Simulates the scenario once, then sweeps.
ObjectiveReport weight_sweep(int resolution, const SimulationConfig& scenario,
                             const JointTrajectory& reference);

void write_report_csv(const ObjectiveReport& report, std::ostream& out);

}  // namespace bioright
