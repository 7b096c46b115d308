#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "bioright/keypoints.hpp"
#include "bioright/objective.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/sms_config.hpp"
#include "bioright/smsdyn.hpp"
#include "bioright/track_quality.hpp"
#include "bioright/traj.hpp"

namespace {

using namespace bioright;

void BM_EulerRoundTrip(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const EulerYPR e{u(rng), u(rng), u(rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcm_to_euler321(euler321_to_dcm(e)));
  }
}
BENCHMARK(BM_EulerRoundTrip);

void BM_DcmFromAxes(benchmark::State& state) {
  const Vec3 x(1.0, 0.2, -0.3), y(0.1, 1.0, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(dcm_from_axes(x, y));
}
BENCHMARK(BM_DcmFromAxes);

void BM_PdSimulation225s(benchmark::State& state) {
  SimulationConfig cfg;
  const auto ref = surrogate_reference(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(cfg, ref));
}
BENCHMARK(BM_PdSimulation225s)->Unit(benchmark::kMillisecond);

void BM_Synth(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(synth_second_order(13.85, 64.5, 225.0, 0.01));
}
BENCHMARK(BM_Synth)->Unit(benchmark::kMillisecond);

KeypointDataset noisy_dataset(int frames) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.5);
  std::bernoulli_distribution drop(0.1);
  KeypointDataset ds;
  ds.frame_count = frames;
  for (int id = 1; id <= 23; ++id) {
    KeypointTrack t;
    t.id = id;
    t.name = std::string(keypoint_name(id));
    for (int f = 0; f < frames; ++f) {
      t.samples.push_back({f, Vec3(10.0 * id + n(rng), 0.5 * f + n(rng), 0.0), !drop(rng), false});
    }
    ds.tracks[id] = std::move(t);
  }
  return ds;
}

void BM_StabilityReport(benchmark::State& state) {
  const auto ds = noisy_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stability_report(ds));
}
BENCHMARK(BM_StabilityReport)->Arg(140)->Arg(2000);

void BM_WeightSweep(benchmark::State& state) {
  const Functionals f{0.46, 1.3, 0.02};
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_sweep(static_cast<int>(state.range(0)), f));
  }
}
BENCHMARK(BM_WeightSweep)->Arg(4)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
