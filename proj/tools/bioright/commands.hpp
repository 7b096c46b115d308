#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bioright/error.hpp"

namespace bioright::cli {

/// 0 success, 2 input/parse, 3 empty/sparse data, 4 domain, 5 divergence.
int exit_code(ErrorCode code);

struct MetricsArgs {
  std::string input;
  std::string output;  // empty: stdout, no manifest
  std::optional<double> frame_rate;
};

struct ReconstructArgs {
  std::string input;
  std::string output;  // file for one segment, directory for several
  std::vector<std::string> segments{"body"};
  bool relative = false;
  std::string leg_reference = "inertial";
  std::optional<std::string> window_ms;  // "A:B"
  std::optional<double> frame_rate;
  std::optional<double> pixel_scale;
  std::optional<std::string> origin_px;  // "u,v"
  bool y_up = false;
  std::optional<double> max_jump;
  std::optional<int> fill_gaps;
};

struct SynthArgs {
  double overshoot = 13.85;
  double rise = 64.5;
  double duration = 225.0;
  double dt = 0.01;
  double start_deg = 0.0;
  double sweep_deg = 180.0;
  std::string output;
};

struct ScaleArgs {
  std::string input;
  std::string output;
  std::optional<double> target_s;
  bool step_metrics = false;
  std::optional<double> steady_time;
  double band = 0.05;
  std::string rise_convention = "10-90";
};

struct SimulateArgs {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> mode;
  std::optional<double> dt;
  std::string output;
};

struct SweepArgs {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> mode;
  std::optional<double> dt;
  int resolution = 4;
  std::string output;
};

struct DemoArgs {
  std::string output_dir = "bioright_demo";
};

/// Each returns the process exit code; domain errors propagate as Error.
int run_metrics(const MetricsArgs& a, const std::vector<std::string>& argv);
int run_reconstruct(const ReconstructArgs& a, const std::vector<std::string>& argv);
int run_synth(const SynthArgs& a, const std::vector<std::string>& argv);
int run_scale(const ScaleArgs& a, const std::vector<std::string>& argv);
int run_simulate(const SimulateArgs& a, const std::vector<std::string>& argv);
int run_sweep(const SweepArgs& a, const std::vector<std::string>& argv);
int run_demo(const DemoArgs& a, const std::vector<std::string>& argv);

}  // namespace bioright::cli
