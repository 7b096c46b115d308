#include "bioright/sms_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

std::string_view to_string(SimMode mode) {
  return mode == SimMode::kPd ? "pd" : "prescribed";
}

SimMode parse_sim_mode(std::string_view text) {
  if (text == "pd") return SimMode::kPd;
  if (text == "prescribed") return SimMode::kPrescribed;
  throw Error(ErrorCode::kConfigError, "unknown simulation mode '" + std::string(text) + "'");
}

namespace {

SmsMode parse_sms_mode(std::string_view text) {
  if (text == "coaxial") return SmsMode::kCoaxial;
  if (text == "planar_offset") return SmsMode::kPlanarOffset;
  throw Error(ErrorCode::kConfigError, "unknown mode '" + std::string(text) + "'");
}

std::string_view sms_mode_name(SmsMode m) {
  return m == SmsMode::kCoaxial ? "coaxial" : "planar_offset";
}

using Setter = std::function<void(SimulationConfig&, std::string_view)>;

double number(std::string_view v) {
  double x = 0.0;
  if (!parse_double(v, x) || !std::isfinite(x)) {
    throw Error(ErrorCode::kConfigError, "not a number: '" + std::string(v) + "'");
  }
  return x;
}

Setter num(double SimulationConfig::*field) {
  return [field](SimulationConfig& c, std::string_view v) { c.*field = number(v); };
}
Setter deg(double SimulationConfig::*field) {
  return [field](SimulationConfig& c, std::string_view v) { c.*field = deg2rad(number(v)); };
}
Setter param(double SmsParams::*field) {
  return [field](SimulationConfig& c, std::string_view v) { c.params.*field = number(v); };
}
Setter gain(double PdGains::*field) {
  return [field](SimulationConfig& c, std::string_view v) { c.gains.*field = number(v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"preset",
       [](SimulationConfig& c, std::string_view v) {
         if (v == "ets7") c.params = ets7_params();
         else if (v == "ets7_reduced") c.params = ets7_reduced_base_params();
         else if (v == "lizard") c.params = lizard_params();
         else throw Error(ErrorCode::kConfigError, "unknown preset '" + std::string(v) + "'");
       }},
      {"base_mass", param(&SmsParams::base_mass)},
      {"arm_mass", param(&SmsParams::arm_mass)},
      {"base_inertia", param(&SmsParams::base_inertia)},
      {"arm_inertia", param(&SmsParams::arm_inertia_cm)},
      {"hinge_offset", param(&SmsParams::hinge_offset)},
      {"arm_cm_offset", param(&SmsParams::arm_cm_offset)},
      {"mode", [](SimulationConfig& c, std::string_view v) { c.params.mode = parse_sms_mode(v); }},
      {"sim_mode", [](SimulationConfig& c, std::string_view v) { c.mode = parse_sim_mode(v); }},
      {"dt", num(&SimulationConfig::dt)},
      {"kp", gain(&PdGains::kp)},
      {"kd", gain(&PdGains::kd)},
      {"torque_limit", gain(&PdGains::torque_limit)},
      {"phi0_deg", deg(&SimulationConfig::initial_base_angle)},
      {"theta0_deg", deg(&SimulationConfig::initial_joint_angle)},
      {"momentum", num(&SimulationConfig::momentum)},
      {"rate_limit_deg_s", deg(&SimulationConfig::rate_limit)},
      {"phi_target_deg",
       [](SimulationConfig& c, std::string_view v) { c.base_target = deg2rad(number(v)); }},
      {"reference_overshoot_pct",
       [](SimulationConfig& c, std::string_view v) { c.reference.overshoot = number(v); }},
      {"reference_rise_s",
       [](SimulationConfig& c, std::string_view v) { c.reference.rise_time = number(v); }},
      {"reference_duration_s",
       [](SimulationConfig& c, std::string_view v) { c.reference.duration = number(v); }},
      {"reference_sweep_deg",
       [](SimulationConfig& c, std::string_view v) { c.reference.sweep = deg2rad(number(v)); }},
  };
  return table;
}

void check(const SimulationConfig& c) {
  try {
    c.params.validate();
    c.gains.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  if (!(c.dt > 0.0)) throw Error(ErrorCode::kConfigError, "dt must be positive");
  if (!(c.rate_limit > 0.0)) throw Error(ErrorCode::kConfigError, "rate_limit_deg_s must be positive");
}

}  // namespace

SimulationConfig parse_config(std::istream& in) {
  SimulationConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError, where + "expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::kConfigError, where + "unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, where + e.what());
    }
  }
  check(cfg);
  return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config '" + path + "'");
  return parse_config(in);
}

void write_config(const SimulationConfig& c, std::ostream& out) {
  auto kv = [&out](std::string_view k, const std::string& v) { out << k << " = " << v << '\n'; };
  auto d = [](double rad) { return format_shortest(rad2deg(rad)); };
  kv("base_mass", format_shortest(c.params.base_mass));
  kv("arm_mass", format_shortest(c.params.arm_mass));
  kv("base_inertia", format_shortest(c.params.base_inertia));
  kv("arm_inertia", format_shortest(c.params.arm_inertia_cm));
  kv("hinge_offset", format_shortest(c.params.hinge_offset));
  kv("arm_cm_offset", format_shortest(c.params.arm_cm_offset));
  kv("mode", std::string(sms_mode_name(c.params.mode)));
  kv("sim_mode", std::string(to_string(c.mode)));
  kv("dt", format_shortest(c.dt));
  kv("kp", format_shortest(c.gains.kp));
  kv("kd", format_shortest(c.gains.kd));
  kv("torque_limit", format_shortest(c.gains.torque_limit));
  kv("phi0_deg", d(c.initial_base_angle));
  kv("theta0_deg", d(c.initial_joint_angle));
  kv("momentum", format_shortest(c.momentum));
  kv("rate_limit_deg_s", d(c.rate_limit));
  if (c.base_target) kv("phi_target_deg", d(*c.base_target));
  kv("reference_overshoot_pct", format_shortest(c.reference.overshoot));
  kv("reference_rise_s", format_shortest(c.reference.rise_time));
  kv("reference_duration_s", format_shortest(c.reference.duration));
  kv("reference_sweep_deg", d(c.reference.sweep));
}

JointTrajectory surrogate_reference(const SimulationConfig& cfg) {
  const auto& r = cfg.reference;
  auto fit = synth_second_order(r.overshoot, r.rise_time, r.duration, cfg.dt,
                                RiseConvention::kTenToNinety, r.sweep);
  for (double& a : fit.trajectory.angle) a += cfg.initial_joint_angle;
  return fit.trajectory;
}

SmsTrajectory run_simulation(const SimulationConfig& cfg, const JointTrajectory& reference) {
  if (cfg.mode == SimMode::kPrescribed) {
    const JointTrajectory playback =
        reference.rate ? reference : differentiate(reference);
    return simulate_prescribed(cfg.params, playback, cfg.initial_base_angle, cfg.momentum);
  }
  PdOptions opt;
  opt.dt = cfg.dt;
  opt.initial_base_angle = cfg.initial_base_angle;
  // Base rate chosen so the system starts with the configured momentum.
  const Mat2 m = mass_matrix(cfg.params, reference.angle.front());
  opt.initial_base_rate = cfg.momentum / m(0, 0);
  return simulate_pd(cfg.params, reference, cfg.gains, opt);
}

}  // namespace bioright
