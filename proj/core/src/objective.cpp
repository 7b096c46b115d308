#include "bioright/objective.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/sms_config.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

void ObjectiveWeights::validate() const {
  if (!(safety >= 0.0 && stability >= 0.0 && efficiency >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weights must be non-negative");
  }
  if (!(safety + stability + efficiency > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weights must not all be zero");
  }
}

ObjectiveWeights ObjectiveWeights::normalized() const {
  validate();
  const double s = safety + stability + efficiency;
  return {safety / s, stability / s, efficiency / s};
}

namespace {

void require_samples(const SmsTrajectory& traj) {
  if (traj.samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty trajectory");
  }
}

double peak_base_rate(const SmsTrajectory& traj) {
  double peak = 0.0;
  for (const auto& s : traj.samples) peak = std::max(peak, std::abs(s.state.base_rate));
  return peak;
}

// Trapezoid integral of f(sample) over the sample times.
template <class F>
double integrate(const SmsTrajectory& traj, F f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double h = traj.samples[i].state.t - traj.samples[i - 1].state.t;
    acc += 0.5 * h * (f(traj.samples[i - 1]) + f(traj.samples[i]));
  }
  return acc;
}

}  // namespace

double phi_safety(const SmsTrajectory& traj, double rate_limit) {
  require_samples(traj);
  if (!(rate_limit > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rate_limit must be positive");
  return peak_base_rate(traj) / rate_limit;
}

double phi_stability(const SmsTrajectory& traj, double base_target) {
  require_samples(traj);
  const double terminal = std::abs(traj.samples.back().state.base_angle - base_target) / kPi;
  const double peak = peak_base_rate(traj);
  const double span = traj.duration();
  if (peak == 0.0 || span <= 0.0) return terminal;
  const double mean =
      integrate(traj, [](const SmsSample& s) { return std::abs(s.state.base_rate); }) / span;
  return terminal + mean / peak;
}

double phi_efficiency(const SmsTrajectory& traj, double torque_limit) {
  require_samples(traj);
  if (!traj.has_torque) throw Error(ErrorCode::kMissingTorque, "trajectory has no torque series");
  if (!(torque_limit > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "torque_limit must be positive");
  }
  const double lim2 = torque_limit * torque_limit;
  const double span = traj.duration();
  if (span <= 0.0) {
    const double tau = traj.samples.front().torque;
    return tau * tau / lim2;
  }
  return integrate(traj, [](const SmsSample& s) { return s.torque * s.torque; }) / (lim2 * span);
}

Functionals evaluate_functionals(const SmsTrajectory& traj, const ObjectiveContext& ctx) {
  return {phi_safety(traj, ctx.rate_limit), phi_stability(traj, ctx.base_target),
          phi_efficiency(traj, ctx.torque_limit)};
}

double combine(const ObjectiveWeights& w, const Functionals& f) {
  return w.safety * f.safety + w.stability * f.stability + w.efficiency * f.efficiency;
}

Evaluation evaluate(const ObjectiveWeights& w, const SmsTrajectory& traj,
                    const ObjectiveContext& ctx) {
  w.validate();
  Evaluation e;
  e.functionals = evaluate_functionals(traj, ctx);
  e.cost = combine(w, e.functionals);
  return e;
}

std::size_t simplex_count(int n) {
  if (n < 0) return 0;
  const auto m = static_cast<std::size_t>(n);
  return (m + 2) * (m + 1) / 2;
}

std::vector<ObjectiveWeights> simplex_grid(int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "grid resolution must be >= 2");
  std::vector<ObjectiveWeights> out;
  out.reserve(simplex_count(n));
  const double dn = n;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      out.push_back({i / dn, j / dn, (n - i - j) / dn});
    }
  }
  return out;
}

ObjectiveReport weight_sweep(int resolution, const Functionals& f) {
  ObjectiveReport report;
  for (const auto& w : simplex_grid(resolution)) {
    report.rows.push_back({w, f, combine(w, f)});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].cost < report.rows[report.argmin].cost) report.argmin = i;
  }
  return report;
}

ObjectiveReport weight_sweep(int resolution, const SimulationConfig& scenario,
                             const JointTrajectory& reference) {
  const SmsTrajectory traj = run_simulation(scenario, reference);
  ObjectiveContext ctx;
  ctx.rate_limit = scenario.rate_limit;
  ctx.base_target = scenario.target();
  ctx.torque_limit = scenario.gains.torque_limit;
  return weight_sweep(resolution, evaluate_functionals(traj, ctx));
}

void write_report_csv(const ObjectiveReport& report, std::ostream& out) {
  for (const auto def : kFunctionalDefinitions) out << "# " << def << '\n';
  out << "# J = w_safety*phi_safety + w_stability*phi_stability + "
         "w_efficiency*phi_efficiency\n";
  auto row = [&out](const ObjectiveRow& r) {
    out << format_shortest(r.weights.safety) << ',' << format_shortest(r.weights.stability)
        << ',' << format_shortest(r.weights.efficiency) << ','
        << format_shortest(r.functionals.safety) << ','
        << format_shortest(r.functionals.stability) << ','
        << format_shortest(r.functionals.efficiency) << ',' << format_shortest(r.cost) << '\n';
  };
  out << "w_safety,w_stability,w_efficiency,phi_safety,phi_stability,phi_efficiency,J\n";
  for (const auto& r : report.rows) row(r);
  if (!report.rows.empty()) {
    out << "# argmin,";
    row(report.best());
  }
}

}  // namespace bioright
