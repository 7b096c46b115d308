#pragma once

#include <cstdint>
#include <vector>

#include "bioright/frames.hpp"
#include "bioright/keypoints.hpp"
#include "bioright/rotmath.hpp"

namespace fixtures {

using bioright::KeypointDataset;
using bioright::KeypointPositions;
using bioright::Rotation;
using bioright::Vec3;

/// 23 keypoints in meters, body x along inertial x, shoulders and hips
/// along inertial y, all four legs pointing straight out along +-y. Every
/// segment frame is the identity except the tail (180 deg about z).
KeypointPositions canonical_lizard();

/// p -> R p for every keypoint; frames then map C -> C R^T.
KeypointPositions rotate(const KeypointPositions& positions, const Eigen::Matrix3d& r);
KeypointPositions translate(const KeypointPositions& positions, const Vec3& offset);
KeypointPositions scale(const KeypointPositions& positions, double factor);

/// Active rotation matrix turning the canonical body to the given roll.
Eigen::Matrix3d active_roll(double roll);

/// Random proper rotation (uniform via normalized Gaussian quaternion).
Eigen::Matrix3d random_rotation(std::uint64_t seed);

struct RightingScenario {
  int frames = 201;
  double frame_rate = 1000.0;
  double total_roll = 2.0 * bioright::kPi;  // body roll from first to last frame
  double leg_jitter = 0.0;                  // rad, amplitude of leg roll about the shoulder
  std::vector<int> missing_frames;          // neck invisible in these frames
};

/// 3D meter dataset of a lizard rolling about inertial x at a uniform rate
/// with each leg wobbling about its own body-x line through the shoulder or
/// hip by leg_jitter * sin(...) (distinct phase per leg).
KeypointDataset righting_dataset(const RightingScenario& scenario);

/// Leg roll offset (rad) applied by righting_dataset at `frame` for `leg`.
double leg_jitter_at(const RightingScenario& scenario, bioright::Segment leg, int frame);

/// 23 tracks over 140 frames, 2D pixels. Keypoint k gets a leading dropout
/// of gap_frames(k) in [45, 60] and visible_frames(k) in [31, 47] visible
/// frames in consecutive pairs spread evenly over the rest.
KeypointDataset occlusion_pattern_dataset();
int occlusion_gap(int id);
int occlusion_visible(int id);

/// Track of 12 consecutive visible steps of length exactly 2.67 px in
/// varying directions, then a 5-frame dropout and a far re-appearance that
/// must not count.
bioright::KeypointTrack movement_fixture_track(int id = 23);

/// Two 2D tracks at fixed distinct positions plus small drift over
/// `frames` frames.
KeypointDataset two_track_dataset(int frames = 30);

}  // namespace fixtures
