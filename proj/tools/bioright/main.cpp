#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bioright/version.hpp"
#include "commands.hpp"

namespace cli = bioright::cli;

int main(int argc, char** argv) {
  CLI::App app{"Keypoint reconstruction, trajectory scaling and free-floating "
               "base simulation"};
  app.set_version_flag("--version", std::string(bioright::kVersion));
  app.require_subcommand(1);
  const std::vector<std::string> args(argv + 1, argv + argc);

  cli::MetricsArgs metrics;
  auto* c_metrics = app.add_subcommand("metrics", "Keypoint tracking stability report");
  c_metrics->add_option("--input,-i", metrics.input, "Keypoint dataset (.csv or .json)")->required();
  c_metrics->add_option("--output,-o", metrics.output, "Report CSV (default stdout)");
  c_metrics->add_option("--frame-rate", metrics.frame_rate, "Override frame rate (Hz)");

  cli::ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Segment frames and Euler angle series");
  c_rec->add_option("--input,-i", rec.input, "Keypoint dataset")->required();
  c_rec->add_option("--output,-o", rec.output,
                    "Output CSV, or directory when several segments are requested")
      ->required();
  c_rec->add_option("--segment", rec.segments,
                    "body, tail, left_front, left_hind, right_front, right_hind or all")
      ->delimiter(',');
  c_rec->add_flag("--relative", rec.relative, "Leg series relative to the body frame");
  c_rec->add_option("--leg-reference", rec.leg_reference, "inertial (default) or body");
  c_rec->add_option("--window-ms", rec.window_ms, "Time window A:B in milliseconds");
  c_rec->add_option("--frame-rate", rec.frame_rate, "Override frame rate (Hz)");
  c_rec->add_option("--pixel-scale", rec.pixel_scale, "Meters per pixel for 2D pixel data");
  c_rec->add_option("--origin-px", rec.origin_px, "Pixel origin u,v");
  c_rec->add_flag("--y-up", rec.y_up, "Image v axis points up");
  c_rec->add_option("--max-jump", rec.max_jump, "Identity repair jump threshold (pixels)");
  c_rec->add_option("--fill-gaps", rec.fill_gaps, "Interpolate gaps up to N frames");

  cli::SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Second-order surrogate joint trajectory");
  c_synth->add_option("--overshoot", synth.overshoot, "Overshoot (percent)");
  c_synth->add_option("--rise", synth.rise, "10-90 rise time (s)");
  c_synth->add_option("--duration", synth.duration, "Duration (s)");
  c_synth->add_option("--dt", synth.dt, "Sample step (s)");
  c_synth->add_option("--start-deg", synth.start_deg, "Initial angle (deg)");
  c_synth->add_option("--sweep-deg", synth.sweep_deg, "Final minus initial angle (deg)");
  c_synth->add_option("--output,-o", synth.output, "Trajectory CSV")->required();

  cli::ScaleArgs scale;
  auto* c_scale = app.add_subcommand("scale", "Time-scale a joint trajectory");
  c_scale->add_option("--input,-i", scale.input, "Trajectory CSV")->required();
  c_scale->add_option("--output,-o", scale.output, "Scaled trajectory CSV");
  c_scale->add_option("--target-s", scale.target_s, "Target duration (s)");
  c_scale->add_flag("--step-metrics", scale.step_metrics, "Print rise/settling/overshoot");
  c_scale->add_option("--steady-time", scale.steady_time,
                      "Time of the assumed final value (default: end)");
  c_scale->add_option("--band", scale.band, "Settling band (fraction of the step)");
  c_scale->add_option("--rise-convention", scale.rise_convention, "10-90 or 0-100");

  cli::SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Free-floating base simulation");
  c_sim->add_option("--config,-c", sim.config, "key = value parameter file");
  c_sim->add_option("--input,-i", sim.input,
                    "Joint reference CSV (default: surrogate from the config)");
  c_sim->add_option("--mode", sim.mode, "prescribed or pd");
  c_sim->add_option("--dt", sim.dt, "Integration step (s)");
  c_sim->add_option("--output,-o", sim.output, "Trajectory CSV")->required();

  cli::SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Objective weight sweep over the simplex grid");
  c_sweep->add_option("--config,-c", sweep.config, "key = value parameter file");
  c_sweep->add_option("--input,-i", sweep.input, "Joint reference CSV");
  c_sweep->add_option("--mode", sweep.mode, "prescribed or pd");
  c_sweep->add_option("--dt", sweep.dt, "Integration step (s)");
  c_sweep->add_option("--resolution", sweep.resolution, "Grid resolution n >= 2");
  c_sweep->add_option("--output,-o", sweep.output, "Report CSV")->required();

  cli::DemoArgs demo;
  auto* c_demo = app.add_subcommand("demo", "synth -> scale -> simulate -> sweep");
  c_demo->add_option("--output-dir,-o", demo.output_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_metrics) return cli::run_metrics(metrics, args);
    if (*c_rec) return cli::run_reconstruct(rec, args);
    if (*c_synth) return cli::run_synth(synth, args);
    if (*c_scale) return cli::run_scale(scale, args);
    if (*c_sim) return cli::run_simulate(sim, args);
    if (*c_sweep) return cli::run_sweep(sweep, args);
    if (*c_demo) return cli::run_demo(demo, args);
  } catch (const bioright::Error& e) {
    std::cerr << "error [" << bioright::to_string(e.code()) << "]: " << e.what() << '\n';
    return cli::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
