#include "fixtures.hpp"

#include <cmath>
#include <algorithm>
#include <random>

#include <Eigen/Geometry>

namespace fixtures {

using namespace bioright;

KeypointPositions canonical_lizard() {
  // Body 6 cm vent -> neck, shoulder width 2 cm, legs 2.5 cm long.
  KeypointPositions p;
  p[kp::kNeck] = {0.060, 0.000, 0.000};
  p[2] = {0.080, 0.000, 0.004};    // Head
  p[3] = {0.095, 0.000, 0.002};    // Mouth_Front
  p[4] = {0.075, 0.006, 0.002};    // Eye_Right
  p[5] = {0.075, -0.006, 0.002};   // Eye_Left
  p[6] = {0.088, 0.004, 0.000};    // Mouth_Back_Right
  p[7] = {0.088, -0.004, 0.000};   // Mouth_Back_Left
  p[kp::kShoulderRight] = {0.050, -0.010, 0.000};
  p[kp::kShoulderLeft] = {0.050, 0.010, 0.000};
  p[kp::kWristRight] = {0.050, -0.035, 0.000};
  p[kp::kWristLeft] = {0.050, 0.035, 0.000};
  p[10] = {0.050, -0.022, 0.000};  // Elbow_Right
  p[11] = {0.050, 0.022, 0.000};   // Elbow_Left
  p[14] = {0.030, 0.000, 0.006};   // Torso_Mid_Back
  p[kp::kHipRight] = {0.005, -0.010, 0.000};
  p[kp::kHipLeft] = {0.005, 0.010, 0.000};
  p[kp::kAnkleRight] = {0.005, -0.035, 0.000};
  p[kp::kAnkleLeft] = {0.005, 0.035, 0.000};
  p[17] = {0.005, -0.022, 0.000};  // Knee_Right
  p[18] = {0.005, 0.022, 0.000};   // Knee_Left
  p[kp::kVent] = {0.000, 0.000, 0.000};
  p[22] = {-0.050, 0.000, 0.000};  // Tail_Mid_Back
  p[kp::kTailTip] = {-0.100, 0.000, 0.000};
  return p;
}

KeypointPositions rotate(const KeypointPositions& positions, const Eigen::Matrix3d& r) {
  KeypointPositions out;
  for (const auto& [id, x] : positions) out[id] = r * x;
  return out;
}

KeypointPositions translate(const KeypointPositions& positions, const Vec3& offset) {
  KeypointPositions out;
  for (const auto& [id, x] : positions) out[id] = x + offset;
  return out;
}

KeypointPositions scale(const KeypointPositions& positions, double factor) {
  KeypointPositions out;
  for (const auto& [id, x] : positions) out[id] = factor * x;
  return out;
}

Eigen::Matrix3d active_roll(double roll) {
  return Eigen::AngleAxisd(roll, Vec3::UnitX()).toRotationMatrix();
}

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

namespace {

struct LegJoint {
  Segment leg;
  int root;  // shoulder or hip, fixed to the body
  std::vector<int> distal;
};

const std::vector<LegJoint>& leg_joints() {
  static const std::vector<LegJoint> joints = {
      {Segment::kRightFrontLeg, kp::kShoulderRight, {kp::kWristRight, 10}},
      {Segment::kLeftFrontLeg, kp::kShoulderLeft, {kp::kWristLeft, 11}},
      {Segment::kRightHindLeg, kp::kHipRight, {kp::kAnkleRight, 17}},
      {Segment::kLeftHindLeg, kp::kHipLeft, {kp::kAnkleLeft, 18}},
  };
  return joints;
}

double leg_phase(Segment leg) {
  switch (leg) {
    case Segment::kRightFrontLeg: return 0.0;
    case Segment::kLeftFrontLeg: return 1.3;
    case Segment::kRightHindLeg: return 2.1;
    default: return 4.0;
  }
}

}  // namespace

double leg_jitter_at(const RightingScenario& scenario, Segment leg, int frame) {
  return scenario.leg_jitter * std::sin(0.37 * frame + leg_phase(leg));
}

KeypointDataset righting_dataset(const RightingScenario& scenario) {
  KeypointDataset ds;
  ds.frame_rate = scenario.frame_rate;
  ds.frame_count = scenario.frames;
  ds.unit = Unit::kMeter;
  ds.dimension = 3;
  for (int id = 1; id <= 23; ++id) {
    ds.tracks[id].id = id;
    ds.tracks[id].name = std::string(keypoint_name(id));
  }
  const KeypointPositions base = canonical_lizard();
  for (int f = 0; f < scenario.frames; ++f) {
    KeypointPositions pose = base;
    for (const auto& j : leg_joints()) {
      const Eigen::Matrix3d wobble = active_roll(leg_jitter_at(scenario, j.leg, f));
      for (int id : j.distal) pose[id] = base.at(j.root) + wobble * (base.at(id) - base.at(j.root));
    }
    const double roll =
        scenario.frames > 1 ? scenario.total_roll * f / (scenario.frames - 1) : 0.0;
    pose = rotate(pose, active_roll(roll));
    const bool neck_missing =
        std::find(scenario.missing_frames.begin(), scenario.missing_frames.end(), f) !=
        scenario.missing_frames.end();
    for (int id = 1; id <= 23; ++id) {
      KeypointSample s;
      s.frame = f;
      s.position = pose.at(id);
      s.visible = !(neck_missing && id == kp::kNeck);
      ds.tracks[id].samples.push_back(s);
    }
  }
  return ds;
}

int occlusion_gap(int id) { return 45 + (id * 7) % 16; }        // 45..60
int occlusion_visible(int id) { return 31 + (id * 5) % 17; }    // 31..47

KeypointDataset occlusion_pattern_dataset() {
  KeypointDataset ds;
  ds.frame_rate = 1000.0;
  ds.frame_count = 140;
  ds.unit = Unit::kPixel;
  ds.dimension = 2;
  std::mt19937_64 rng(140);
  std::normal_distribution<double> noise(0.0, 1.5);
  for (int id = 1; id <= 23; ++id) {
    KeypointTrack t;
    t.id = id;
    t.name = std::string(keypoint_name(id));
    const int gap = occlusion_gap(id);
    const int vis = occlusion_visible(id);
    // Visible frames come in consecutive pairs so every track has movement.
    const int pairs = (vis + 1) / 2;
    const int stride = (140 - gap) / pairs;
    std::vector<bool> shown(140, false);
    for (int k = 0; k < vis; ++k) shown[gap + (k / 2) * stride + k % 2] = true;
    for (int f = 0; f < 140; ++f) {
      KeypointSample s;
      s.frame = f;
      s.visible = shown[f];
      if (s.visible) s.position = {300.0 + 10.0 * id + noise(rng), 200.0 + 2.0 * f + noise(rng), 0.0};
      t.samples.push_back(s);
    }
    ds.tracks[id] = std::move(t);
  }
  return ds;
}

KeypointTrack movement_fixture_track(int id) {
  KeypointTrack t;
  t.id = id;
  t.name = std::string(keypoint_name(id));
  Vec3 p(100.0, 100.0, 0.0);
  int f = 0;
  t.samples.push_back({f++, p, true, false});
  for (int i = 0; i < 12; ++i) {
    const double a = 0.4 * i;
    p += 2.67 * Vec3(std::cos(a), std::sin(a), 0.0);
    t.samples.push_back({f++, p, true, false});
  }
  for (int i = 0; i < 5; ++i) t.samples.push_back({f++, Vec3::Zero(), false, false});
  t.samples.push_back({f++, p + Vec3(400.0, 0.0, 0.0), true, false});
  return t;
}

KeypointDataset two_track_dataset(int frames) {
  KeypointDataset ds;
  ds.frame_rate = 100.0;
  ds.frame_count = frames;
  ds.unit = Unit::kPixel;
  ds.dimension = 2;
  for (int id : {1, 2}) {
    KeypointTrack t;
    t.id = id;
    t.name = std::string(keypoint_name(id));
    const Vec3 origin = id == 1 ? Vec3(100.0, 100.0, 0.0) : Vec3(400.0, 300.0, 0.0);
    for (int f = 0; f < frames; ++f) {
      t.samples.push_back({f, origin + Vec3(0.5 * f, 0.25 * f, 0.0), true, false});
    }
    ds.tracks[id] = std::move(t);
  }
  return ds;
}

}  // namespace fixtures
