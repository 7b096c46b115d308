#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bioright/frames.hpp"
#include "bioright/keypoints.hpp"
#include "bioright/objective.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/sms_config.hpp"
#include "bioright/smsdyn.hpp"
#include "bioright/text_format.hpp"
#include "bioright/track_quality.hpp"
#include "bioright/traj.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace bioright::cli {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kConfigError:
      return 2;
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kTooSparse:
    case ErrorCode::kNoValidFrames:
    case ErrorCode::kTooShort:
      return 3;
    case ErrorCode::kDiverged:
      return 5;
    default:
      return 4;
  }
}

namespace {

std::ofstream open_output(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  return out;
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

JointTrajectory read_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  return read_trajectory_csv(in);
}

RiseConvention parse_convention(const std::string& s) {
  if (s == "10-90") return RiseConvention::kTenToNinety;
  if (s == "0-100") return RiseConvention::kZeroToHundred;
  throw Error(ErrorCode::kParseError, "rise convention must be 10-90 or 0-100");
}

std::pair<double, double> parse_pair(const std::string& text, char sep, const char* what) {
  const auto parts = split(text, sep);
  double a = 0.0, b = 0.0;
  if (parts.size() != 2 || !parse_double(trim(parts[0]), a) ||
      !parse_double(trim(parts[1]), b)) {
    throw Error(ErrorCode::kParseError, std::string("malformed ") + what + " '" + text + "'");
  }
  return {a, b};
}

double peak_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string deg(double rad, int decimals = 4) { return format_fixed(rad2deg(rad), decimals); }

SimulationConfig effective_config(const std::optional<std::string>& path,
                                  const std::optional<std::string>& mode,
                                  const std::optional<double>& dt) {
  SimulationConfig cfg = path ? load_config_file(*path) : SimulationConfig{};
  if (mode) {
    try {
      cfg.mode = parse_sim_mode(*mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
  }
  if (dt) {
    if (!(*dt > 0.0)) throw Error(ErrorCode::kParseError, "--dt must be positive");
    cfg.dt = *dt;
  }
  return cfg;
}

std::string settings_text(const SimulationConfig& cfg) {
  std::ostringstream s;
  write_config(cfg, s);
  return s.str();
}

void print_inertia_ratio(const SmsParams& p, std::ostream& out) {
  out << "inertia_ratio = " << format_fixed(inertia_ratio(p), 4) << '\n';
  out << "mass_ratio = " << format_fixed(mass_ratio(p), 4) << '\n';
  out << "published_inertia_ratios = ets7 " << format_shortest(kPublishedEts7InertiaRatio)
      << ", ets7 base/20 " << format_shortest(kPublishedReducedInertiaRatio) << ", lizard "
      << format_shortest(kPublishedLizardInertiaRatio) << '\n';
  out << "note = published ratios are printed values; raw parameters give "
         "360/6200 = 0.0581 and 360/310 = 1.16, so the published figures are "
         "reported beside the computed ones rather than used\n";
}

void print_simulation_summary(const SimulationConfig& cfg, const JointTrajectory& ref,
                              const SmsTrajectory& traj, std::ostream& out) {
  const SmsSummary s = summarize(cfg.params, traj);
  out << "mode = " << to_string(cfg.mode) << '\n';
  out << "samples = " << traj.size() << '\n';
  out << "duration_s = " << format_fixed(traj.duration(), 4) << '\n';
  out << "joint_change_deg = " << deg(s.joint_change) << '\n';
  out << "base_change_deg = " << deg(s.base_change) << '\n';
  out << "max_abs_base_excursion_deg = " << deg(s.base_excursion) << '\n';
  out << "peak_base_rate_deg_s = " << deg(s.peak_base_rate, 5) << '\n';
  out << "peak_joint_rate_deg_s = " << deg(s.peak_joint_rate, 5) << '\n';
  out << "peak_torque_Nm = " << format_fixed(s.peak_torque, 4) << '\n';
  out << "momentum_drift = " << format_shortest(s.momentum_drift) << '\n';
  out << "momentum_residual = " << format_shortest(s.momentum_residual) << '\n';
  if (cfg.mode == SimMode::kPd) {
    out << "final_tracking_error_deg = " << deg(s.final_tracking_error, 5) << '\n';
  }
  if (cfg.params.mode == SmsMode::kCoaxial) {
    const double dtheta = ref.angle.back() - ref.angle.front();
    out << "closed_form_base_change_deg = " << deg(base_reaction_estimate(cfg.params, dtheta))
        << '\n';
    for (double r : {kPublishedReducedInertiaRatio, kPublishedEts7InertiaRatio}) {
      out << "closed_form_with_ratio_" << format_shortest(r)
          << "_deg = " << deg(-dtheta * r / (1.0 + r)) << '\n';
    }
  }
  print_inertia_ratio(cfg.params, out);
}

}  // namespace

int run_metrics(const MetricsArgs& a, const std::vector<std::string>& argv) {
  LoadOptions opt;
  opt.frame_rate = a.frame_rate;
  const KeypointDataset ds = load_dataset_file(a.input, opt);
  const auto rows = stability_report(ds);
  if (a.output.empty()) {
    write_stability_report(rows, std::cout);
    return 0;
  }
  {
    auto out = open_output(a.output);
    write_stability_report(rows, out);
  }
  RunManifest m{"metrics", argv, {a.input}, "", {a.output}};
  if (a.frame_rate) m.settings = "frame_rate=" + format_shortest(*a.frame_rate);
  m.write(manifest_path(a.output));
  std::cout << "keypoints = " << rows.size() << '\n';
  return 0;
}

int run_reconstruct(const ReconstructArgs& a, const std::vector<std::string>& argv) {
  if (a.output.empty()) throw Error(ErrorCode::kParseError, "--output is required");
  LoadOptions opt;
  opt.frame_rate = a.frame_rate;
  KeypointDataset ds = load_dataset_file(a.input, opt);

  std::ostringstream settings;
  if (a.max_jump) {
    auto fixed = reassociate_identities(ds, *a.max_jump);
    ds = std::move(fixed.dataset);
    std::cout << "identity_events = " << fixed.report.size() << '\n';
    settings << "max_jump=" << format_shortest(*a.max_jump) << '\n';
  }
  if (a.fill_gaps) {
    for (auto& [id, track] : ds.tracks) {
      try {
        track = interpolate_gaps(track, *a.fill_gaps);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTooSparse) throw;
      }
    }
    settings << "fill_gaps=" << *a.fill_gaps << '\n';
  }
  if (a.pixel_scale) {
    PlanarCalibration calib;
    calib.scale = *a.pixel_scale;
    calib.image_y_down = !a.y_up;
    if (a.origin_px) {
      const auto [u, v] = parse_pair(*a.origin_px, ',', "--origin-px");
      calib.origin_pixel = {u, v};
    }
    ds = pixel_to_world(ds, calib);
    settings << "pixel_scale=" << format_shortest(calib.scale) << " origin="
             << format_shortest(calib.origin_pixel.x()) << ','
             << format_shortest(calib.origin_pixel.y()) << " y_down=" << calib.image_y_down
             << '\n';
  }

  LegReference ref = LegReference::kInertialX;
  if (a.leg_reference == "body") ref = LegReference::kBodyX;
  else if (a.leg_reference != "inertial") {
    throw Error(ErrorCode::kParseError, "--leg-reference must be inertial or body");
  }

  std::vector<Segment> segments;
  for (const auto& name : a.segments) {
    if (name == "all") {
      segments = {Segment::kBody, Segment::kTail, Segment::kLeftFrontLeg,
                  Segment::kLeftHindLeg, Segment::kRightFrontLeg, Segment::kRightHindLeg};
      break;
    }
    const auto seg = parse_segment(name);
    if (!seg) throw Error(ErrorCode::kParseError, "unknown segment '" + name + "'");
    if (std::find(segments.begin(), segments.end(), *seg) == segments.end()) {
      segments.push_back(*seg);
    }
  }

  std::optional<std::pair<double, double>> window;
  if (a.window_ms) {
    const auto [lo, hi] = parse_pair(*a.window_ms, ':', "--window-ms");
    window = std::pair{lo / 1000.0, hi / 1000.0};
  }

  std::optional<SegmentFrameSeries> body;
  auto body_series = [&]() -> const SegmentFrameSeries& {
    if (!body) body = segment_series(ds, segment_definition(Segment::kBody));
    return *body;
  };

  const bool single = segments.size() == 1;
  std::vector<std::string> outputs;
  for (const Segment seg : segments) {
    SegmentFrameSeries series = seg == Segment::kBody ? body_series()
                                                      : segment_series(ds, segment_definition(seg, ref));
    if (a.relative && is_leg(seg)) series = relative_leg_series(series, body_series());
    if (window) series = righting_window(series, window->first, window->second);
    const std::string path =
        single ? a.output : (fs::path(a.output) / (std::string(to_string(seg)) + ".csv")).string();
    auto out = open_output(path);
    write_series_csv(series, out);
    outputs.push_back(path);
  }

  settings << "segments=";
  for (const Segment seg : segments) settings << to_string(seg) << ' ';
  settings << "\nrelative=" << a.relative << " leg_reference=" << a.leg_reference << '\n';
  if (a.window_ms) settings << "window_ms=" << *a.window_ms << '\n';
  if (a.frame_rate) settings << "frame_rate=" << format_shortest(*a.frame_rate) << '\n';
  RunManifest m{"reconstruct", argv, {a.input}, settings.str(), outputs};
  m.write(single ? manifest_path(a.output) : (fs::path(a.output) / "manifest.json").string());
  for (const auto& p : outputs) std::cout << "wrote " << p << '\n';
  return 0;
}

int run_synth(const SynthArgs& a, const std::vector<std::string>& argv) {
  if (a.output.empty()) throw Error(ErrorCode::kParseError, "--output is required");
  auto fit = synth_second_order(a.overshoot, a.rise, a.duration, a.dt,
                                RiseConvention::kTenToNinety, deg2rad(a.sweep_deg));
  for (double& x : fit.trajectory.angle) x += deg2rad(a.start_deg);
  {
    auto out = open_output(a.output);
    write_trajectory_csv(fit.trajectory, out);
  }
  std::ostringstream settings;
  settings << "overshoot=" << format_shortest(a.overshoot) << " rise=" << format_shortest(a.rise)
           << " duration=" << format_shortest(a.duration) << " dt=" << format_shortest(a.dt)
           << " start_deg=" << format_shortest(a.start_deg)
           << " sweep_deg=" << format_shortest(a.sweep_deg);
  RunManifest{"synth", argv, {}, settings.str(), {a.output}}.write(manifest_path(a.output));
  std::cout << "damping_ratio = " << format_fixed(fit.damping_ratio, 6) << '\n'
            << "natural_frequency_rad_s = " << format_shortest(fit.natural_frequency) << '\n'
            << "overshoot_pct = " << format_fixed(fit.overshoot, 4) << '\n'
            << "rise_time_s = " << format_shortest(fit.rise_time) << '\n'
            << "peak_rate_deg_s = " << deg(peak_abs(*fit.trajectory.rate), 4) << '\n';
  return 0;
}

int run_scale(const ScaleArgs& a, const std::vector<std::string>& argv) {
  if (a.output.empty() && !a.step_metrics) {
    throw Error(ErrorCode::kParseError, "nothing to do: give --output or --step-metrics");
  }
  const RiseConvention conv = parse_convention(a.rise_convention);
  JointTrajectory traj = read_trajectory_file(a.input);
  if (a.target_s) {
    const double k = time_scale_factor(traj, *a.target_s);
    traj = time_scale(traj, *a.target_s);
    std::cout << "scale_factor = " << format_shortest(k) << '\n';
    if (traj.rate) std::cout << "peak_rate_deg_s = " << deg(peak_abs(*traj.rate), 6) << '\n';
  }
  std::vector<std::string> outputs;
  if (!a.output.empty()) {
    auto out = open_output(a.output);
    write_trajectory_csv(traj, out);
    outputs.push_back(a.output);
  }
  if (a.step_metrics) {
    const double steady = a.steady_time.value_or(traj.duration());
    const auto m = step_metrics(traj, steady, a.band, conv);
    write_metrics_text(m, std::cout);
  }
  if (!outputs.empty()) {
    std::ostringstream settings;
    if (a.target_s) settings << "target_s=" << format_shortest(*a.target_s) << '\n';
    RunManifest{"scale", argv, {a.input}, settings.str(), outputs}.write(manifest_path(a.output));
  }
  return 0;
}

int run_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
  if (a.output.empty()) throw Error(ErrorCode::kParseError, "--output is required");
  const SimulationConfig cfg = effective_config(a.config, a.mode, a.dt);
  const JointTrajectory ref = a.input ? read_trajectory_file(*a.input) : surrogate_reference(cfg);
  const SmsTrajectory traj = run_simulation(cfg, ref);
  {
    auto out = open_output(a.output);
    write_sms_csv(traj, out);
  }
  std::vector<std::string> inputs;
  if (a.config) inputs.push_back(*a.config);
  if (a.input) inputs.push_back(*a.input);
  RunManifest{"simulate", argv, inputs, settings_text(cfg), {a.output}}.write(
      manifest_path(a.output));
  print_simulation_summary(cfg, ref, traj, std::cout);
  return 0;
}

int run_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
  if (a.output.empty()) throw Error(ErrorCode::kParseError, "--output is required");
  if (a.resolution < 2) throw Error(ErrorCode::kParseError, "--resolution must be >= 2");
  const SimulationConfig cfg = effective_config(a.config, a.mode, a.dt);
  const JointTrajectory ref = a.input ? read_trajectory_file(*a.input) : surrogate_reference(cfg);
  const ObjectiveReport report = weight_sweep(a.resolution, cfg, ref);
  {
    auto out = open_output(a.output);
    write_report_csv(report, out);
  }
  std::vector<std::string> inputs;
  if (a.config) inputs.push_back(*a.config);
  if (a.input) inputs.push_back(*a.input);
  RunManifest m{"sweep", argv, inputs,
                settings_text(cfg) + "resolution = " + std::to_string(a.resolution) + '\n',
                {a.output}};
  m.write(manifest_path(a.output));
  const auto& best = report.best();
  std::cout << "rows = " << report.rows.size() << '\n'
            << "argmin_weights = " << format_shortest(best.weights.safety) << ','
            << format_shortest(best.weights.stability) << ','
            << format_shortest(best.weights.efficiency) << '\n'
            << "argmin_J = " << format_shortest(best.cost) << '\n'
            << "config_digest = " << m.config_digest() << '\n';
  return 0;
}

int run_demo(const DemoArgs& a, const std::vector<std::string>& argv) {
  const fs::path dir(a.output_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  auto write = [&](const std::string& name, auto&& fn) {
    const std::string path = (dir / name).string();
    auto out = open_output(path);
    fn(out);
    outputs.push_back(path);
  };
  std::ostream& log = std::cout;

  // Animal-speed surrogate: the same shape as the 225 s reference over 150 ms.
  constexpr double kAnimalDuration = 0.150, kTarget = 225.0;
  SimulationConfig cfg;  // ETS-VII, theta 180 deg -> 0 deg
  const double k_nominal = kTarget / kAnimalDuration;
  auto animal = synth_second_order(cfg.reference.overshoot,
                                   cfg.reference.rise_time / k_nominal, kAnimalDuration,
                                   kAnimalDuration / 1500.0, RiseConvention::kTenToNinety,
                                   cfg.reference.sweep);
  for (double& x : animal.trajectory.angle) x += cfg.initial_joint_angle;
  const JointTrajectory& fast = animal.trajectory;
  write("animal_reference.csv", [&](std::ostream& o) { write_trajectory_csv(fast, o); });

  const double k = time_scale_factor(fast, kTarget);
  const JointTrajectory scaled = time_scale(fast, kTarget);
  write("scaled_reference.csv", [&](std::ostream& o) { write_trajectory_csv(scaled, o); });
  log << "[scale]\n"
      << "animal_duration_s = " << format_shortest(fast.duration()) << '\n'
      << "animal_peak_joint_rate_deg_s = " << deg(peak_abs(*fast.rate), 2) << '\n'
      << "scale_factor = " << format_shortest(k) << '\n'
      << "scaled_duration_s = " << format_shortest(scaled.duration()) << '\n'
      << "scaled_peak_joint_rate_deg_s = " << deg(peak_abs(*scaled.rate), 4) << '\n';
  const auto sm = step_metrics(scaled, scaled.duration());
  log << "[step_metrics]\n";
  write_metrics_text(sm, log);

  log << "[ets7_prescribed]\n";
  cfg.mode = SimMode::kPrescribed;
  const auto pres = run_simulation(cfg, scaled);
  write("ets7_prescribed.csv", [&](std::ostream& o) { write_sms_csv(pres, o); });
  print_simulation_summary(cfg, scaled, pres, log);

  log << "[ets7_pd]\n";
  cfg.mode = SimMode::kPd;
  const auto pd = run_simulation(cfg, scaled);
  write("ets7_pd.csv", [&](std::ostream& o) { write_sms_csv(pd, o); });
  print_simulation_summary(cfg, scaled, pd, log);

  log << "[ets7_base_div20_prescribed]\n";
  SimulationConfig reduced = cfg;
  reduced.params = ets7_reduced_base_params();
  reduced.mode = SimMode::kPrescribed;
  const auto red = run_simulation(reduced, scaled);
  write("ets7_base_div20_prescribed.csv", [&](std::ostream& o) { write_sms_csv(red, o); });
  print_simulation_summary(reduced, scaled, red, log);

  log << "[lizard_prescribed_animal_speed]\n";
  SimulationConfig lizard = cfg;
  lizard.params = lizard_params();
  lizard.mode = SimMode::kPrescribed;
  const auto liz = run_simulation(lizard, fast);
  write("lizard_prescribed.csv", [&](std::ostream& o) { write_sms_csv(liz, o); });
  print_simulation_summary(lizard, fast, liz, log);

  log << "[sweep]\n";
  ObjectiveContext ctx;
  ctx.rate_limit = cfg.rate_limit;
  ctx.base_target = cfg.target();
  ctx.torque_limit = cfg.gains.torque_limit;
  const auto report = weight_sweep(4, evaluate_functionals(pd, ctx));
  write("sweep.csv", [&](std::ostream& o) { write_report_csv(report, o); });
  const auto& best = report.best();
  log << "rows = " << report.rows.size() << '\n'
      << "argmin_weights = " << format_shortest(best.weights.safety) << ','
      << format_shortest(best.weights.stability) << ','
      << format_shortest(best.weights.efficiency) << '\n'
      << "argmin_J = " << format_shortest(best.cost) << '\n';

  RunManifest{"demo", argv, {}, settings_text(cfg), outputs}.write(
      (dir / "manifest.json").string());
  return 0;
}

}  // namespace bioright::cli
