#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioright/keypoints.hpp"

namespace bioright {

struct KeypointMetrics {
  int id = 0;
  double average_movement = 0.0;     // pixels (or meters) per frame
  double normalized_movement = 0.0;  // [0, 1]
  double visibility = 0.0;           // percent
  int max_gap_length = 0;            // frames
  double position_variance = 0.0;    // population variance summed over axes
  double drift_score = 0.0;          // [0, 1]
};

/// Ordered by severity.
enum class StabilityCategory {
  kStable,
  kModeratelyStable,
  kDrifting,
  kFrequentlyOccluded,
  kOccluded,
};
std::string_view to_string(StabilityCategory category);

/// Mean displacement over consecutive-frame visible pairs; pairs that span
/// an invisible frame are skipped. Throws kTooSparse without such a pair.
double average_movement(const KeypointTrack& track);
double visibility(const KeypointTrack& track, int frame_count);
/// Longest invisible run; leading and trailing runs count. Frames with no
/// sample at all count as invisible.
int max_gap_length(const KeypointTrack& track, int frame_count);
int max_gap_length(const KeypointTrack& track);
double position_variance(const KeypointTrack& track);
/// 1 - |net displacement| / path length over visible samples, clamped to
/// [0, 1]; 0 for a stationary track.
double drift_score(const KeypointTrack& track);

/// Each track's average movement divided by the dataset maximum. Tracks
/// without a computable movement are omitted.
std::map<int, double> normalized_movement(const KeypointDataset& dataset);

inline constexpr double kOccludedGapFraction = 0.30;
inline constexpr double kFrequentlyOccludedVisibility = 50.0;
inline constexpr double kDriftingScore = 0.6;
inline constexpr double kModerateDriftScore = 0.3;

/// Decision ladder, first match wins: long gap -> Occluded; low visibility
/// -> FrequentlyOccluded; high drift -> Drifting; moderate drift or
/// variance above the dataset median -> ModeratelyStable; else Stable.
StabilityCategory classify_stability(
    const KeypointMetrics& m, int frame_count,
    std::optional<double> variance_median = std::nullopt);

struct StabilityRow {
  int id = 0;
  std::string name;
  std::optional<KeypointMetrics> metrics;  // empty when not computable
  std::optional<StabilityCategory> category;
  double visibility = 0.0;
  int max_gap_length = 0;
  std::string reason;  // error code when metrics are missing
};

std::vector<StabilityRow> stability_report(const KeypointDataset& dataset);

/// CSV with 2-decimal fixed formatting, preceded by `#` comment lines.
void write_stability_report(const std::vector<StabilityRow>& rows,
                            std::ostream& out);

}  // namespace bioright
