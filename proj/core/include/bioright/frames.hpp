#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "bioright/keypoints.hpp"
#include "bioright/rotmath.hpp"

namespace bioright {

enum class Segment {
  kBody,
  kTail,
  kLeftFrontLeg,
  kLeftHindLeg,
  kRightFrontLeg,
  kRightHindLeg,
};
std::string_view to_string(Segment segment);
std::optional<Segment> parse_segment(std::string_view text);
bool is_leg(Segment segment);

/// Companion axis for the leg z construction. kInertialX is the default;
/// kBodyX substitutes the body-frame x axis, which makes leg frames rotate
/// with the whole animal.
enum class LegReference { kInertialX, kBodyX };

using KeypointPositions = std::map<int, Vec3>;

/// Ordered keypoint pairs (from, to) for the primary axis and, for body and
/// tail, the temporary companion axis.
struct SegmentDefinition {
  Segment segment = Segment::kBody;
  std::pair<int, int> primary;
  std::optional<std::pair<int, int>> companion;
  LegReference leg_reference = LegReference::kInertialX;
};

SegmentDefinition segment_definition(
    Segment segment, LegReference leg_reference = LegReference::kInertialX);

/// Conventions that are choices rather than fixed by the frame recipes.
inline constexpr std::string_view kTailAxisConvention = "tail x: vent(21)->tip(23)";
inline constexpr std::string_view kLegAxisConvention =
    "leg z: normalize(x_ref x y_leg); leg x: y_leg x z";

/// C_BN: x = vent(21) -> neck(1), y_temp = shoulder 12 -> 13.
Rotation body_frame(const KeypointPositions& positions);
/// C_TN: x = vent(21) -> tip(23), y_temp = hip 20 -> 19.
Rotation tail_frame(const KeypointPositions& positions);
/// C_LiN. `body_x` is required for LegReference::kBodyX.
Rotation leg_frame(Segment leg, const KeypointPositions& positions,
                   LegReference reference = LegReference::kInertialX,
                   const std::optional<Vec3>& body_x = std::nullopt);

Rotation segment_frame(const SegmentDefinition& def,
                       const KeypointPositions& positions);

struct SegmentFrameSeries {
  Segment segment = Segment::kBody;
  std::vector<double> times;        // seconds
  std::vector<Rotation> rotations;  // identity where invalid
  std::vector<EulerYPR> euler;      // unwrapped; NaN where invalid
  std::vector<bool> valid;

  std::size_t size() const { return times.size(); }
};

/// Visible keypoint positions of one frame.
KeypointPositions positions_at(const KeypointDataset& dataset, int frame);

/// Per-frame frame construction. Throws kSchemaError unless the dataset is
/// 3D, in meters and has a frame rate. Frames with missing or degenerate
/// keypoints are invalid; Euler angles are unwrapped along the valid samples.
SegmentFrameSeries segment_series(const KeypointDataset& dataset,
                                  const SegmentDefinition& def);

/// C_LiB = C_LiN C_BN^T per sample.
SegmentFrameSeries relative_leg_series(const SegmentFrameSeries& leg,
                                       const SegmentFrameSeries& body);

/// Samples with t_start <= t <= t_end, times shifted so the window starts
/// at zero.
SegmentFrameSeries righting_window(const SegmentFrameSeries& series,
                                   double t_start, double t_end);

/// Recomputes unwrapped Euler angles from the rotations.
void refresh_euler(SegmentFrameSeries& series);

/// `t,yaw_deg,pitch_deg,roll_deg,valid` with 4 decimals.
void write_series_csv(const SegmentFrameSeries& series, std::ostream& out);

}  // namespace bioright
