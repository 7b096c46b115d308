#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioright/rotmath.hpp"

namespace bioright {

inline constexpr int kKeypointCount = 23;

/// Canonical names indexed by id - 1.
inline constexpr std::array<std::string_view, kKeypointCount> kKeypointNames = {
    "Neck",           "Eye_Left",          "Eye_Right",
    "Mouth_Front_Top", "Mouth_Front_Bottom", "Mouth_Back_Right",
    "Mouth_Back_Left", "Wrist_Right",       "Wrist_Left",
    "Elbow_Right",    "Elbow_Left",        "Shoulder_Right",
    "Shoulder_Left",  "Torso_Mid_Back",    "Ankle_Right",
    "Ankle_Left",     "Knee_Right",        "Knee_Left",
    "Hip_Right",      "Hip_Left",          "Tail_Top_Back",
    "Tail_Mid_Back",  "Tail_End_Back",
};

/// Ids referenced by the segment frame recipes.
namespace kp {
inline constexpr int kNeck = 1;
inline constexpr int kWristRight = 8;
inline constexpr int kWristLeft = 9;
inline constexpr int kShoulderRight = 12;
inline constexpr int kShoulderLeft = 13;
inline constexpr int kAnkleRight = 15;
inline constexpr int kAnkleLeft = 16;
inline constexpr int kHipRight = 19;
inline constexpr int kHipLeft = 20;
inline constexpr int kVent = 21;  // Tail_Top_Back
inline constexpr int kTailTip = 23;
}  // namespace kp

std::string_view keypoint_name(int id);
/// Returns the id for a canonical name, or nullopt.
std::optional<int> keypoint_id(std::string_view name);

enum class Unit { kPixel, kMeter };
std::string_view to_string(Unit unit);

struct KeypointSample {
  int frame = 0;
  Vec3 position = Vec3::Zero();  // z unused (0) for 2D data
  bool visible = false;
  bool interpolated = false;

  bool operator==(const KeypointSample&) const = default;
};

struct KeypointTrack {
  int id = 0;
  std::string name;
  std::vector<KeypointSample> samples;  // frame strictly increasing

  std::size_t visible_count() const;
  bool operator==(const KeypointTrack&) const = default;
};

struct KeypointDataset {
  std::map<int, KeypointTrack> tracks;
  std::optional<double> frame_rate;  // Hz; never inferred
  int frame_count = 0;
  Unit unit = Unit::kPixel;
  int dimension = 2;  // 2 or 3

  bool operator==(const KeypointDataset&) const = default;
};

/// Throws kSchemaError when any invariant is violated.
void validate(const KeypointDataset& dataset);

enum class DatasetFormat { kCsv, kJson };

struct LoadOptions {
  /// Overrides any frame rate present in the source.
  std::optional<double> frame_rate;
};

/// Missing (frame, keypoint) rows become invisible samples, so every track
/// covers frames [0, frame_count).
KeypointDataset load_dataset(std::istream& source, DatasetFormat format,
                             const LoadOptions& options = {});
KeypointDataset load_dataset_file(const std::string& path,
                                  const LoadOptions& options = {});
void save_dataset(const KeypointDataset& dataset, std::ostream& sink,
                  DatasetFormat format);

enum class JumpKind { kSwap, kUnresolved };

struct JumpEvent {
  int frame = 0;
  JumpKind kind = JumpKind::kSwap;
  /// (from_track, to_track) moves of detections. For kUnresolved the pair is
  /// (id, id).
  std::vector<std::pair<int, int>> moves;
};

struct Reassociation {
  KeypointDataset dataset;
  std::vector<JumpEvent> report;
};

/// Greedy nearest-centroid identity repair for 2D data. A detection that
/// moved more than `max_jump` pixels is re-matched to the track whose
/// last-known position is nearest (ties -> lower id); the re-labelling
/// persists until the next detected jump.
Reassociation reassociate_identities(const KeypointDataset& dataset,
                                     double max_jump);

/// Linear fill of invisible runs of at most `max_gap` frames bounded by
/// visible samples on both sides.
KeypointTrack interpolate_gaps(const KeypointTrack& track, int max_gap);

struct PlanarCalibration {
  double scale = 1.0;  // meters per pixel
  Eigen::Vector2d origin_pixel = Eigen::Vector2d::Zero();
  bool image_y_down = true;
};

/// Affine map of image coordinates onto the world x-y plane (z = 0).
Vec3 pixel_to_world(const Eigen::Vector2d& pixel, const PlanarCalibration& calib);
Eigen::Vector2d world_to_pixel(const Vec3& world, const PlanarCalibration& calib);
KeypointDataset pixel_to_world(const KeypointDataset& dataset,
                               const PlanarCalibration& calib);

}  // namespace bioright
