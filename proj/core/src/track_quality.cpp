#include "bioright/track_quality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bioright/error.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

namespace {

std::vector<const KeypointSample*> visible_samples(const KeypointTrack& t) {
  std::vector<const KeypointSample*> out;
  for (const auto& s : t.samples) {
    if (s.visible) out.push_back(&s);
  }
  return out;
}

[[noreturn]] void too_sparse(const KeypointTrack& t, const char* what) {
  throw Error(ErrorCode::kTooSparse,
              std::string(what) + ": not enough visible samples in " + t.name);
}

}  // namespace

std::string_view to_string(StabilityCategory category) {
  switch (category) {
    case StabilityCategory::kStable: return "stable";
    case StabilityCategory::kModeratelyStable: return "moderately_stable";
    case StabilityCategory::kDrifting: return "drifting";
    case StabilityCategory::kFrequentlyOccluded: return "frequently_occluded";
    case StabilityCategory::kOccluded: return "occluded";
  }
  return "unknown";
}

double average_movement(const KeypointTrack& track) {
  const auto vis = visible_samples(track);
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 1; i < vis.size(); ++i) {
    if (vis[i]->frame - vis[i - 1]->frame != 1) continue;
    sum += (vis[i]->position - vis[i - 1]->position).norm();
    ++pairs;
  }
  if (pairs == 0) too_sparse(track, "average_movement");
  return sum / pairs;
}

double visibility(const KeypointTrack& track, int frame_count) {
  if (frame_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame_count must be >= 1");
  }
  return 100.0 * static_cast<double>(track.visible_count()) / frame_count;
}

int max_gap_length(const KeypointTrack& track, int frame_count) {
  int longest = 0;
  int run = 0;
  std::size_t k = 0;
  for (int f = 0; f < frame_count; ++f) {
    while (k < track.samples.size() && track.samples[k].frame < f) ++k;
    const bool seen = k < track.samples.size() && track.samples[k].frame == f &&
                      track.samples[k].visible;
    run = seen ? 0 : run + 1;
    longest = std::max(longest, run);
  }
  return longest;
}

int max_gap_length(const KeypointTrack& track) {
  int longest = 0;
  int run = 0;
  for (const auto& s : track.samples) {
    run = s.visible ? 0 : run + 1;
    longest = std::max(longest, run);
  }
  return longest;
}

double position_variance(const KeypointTrack& track) {
  const auto vis = visible_samples(track);
  if (vis.size() < 2) too_sparse(track, "position_variance");
  Vec3 mean = Vec3::Zero();
  for (const auto* s : vis) mean += s->position;
  mean /= static_cast<double>(vis.size());
  double acc = 0.0;
  for (const auto* s : vis) acc += (s->position - mean).squaredNorm();
  return acc / static_cast<double>(vis.size());
}

double drift_score(const KeypointTrack& track) {
  const auto vis = visible_samples(track);
  if (vis.size() < 3) too_sparse(track, "drift_score");
  double path = 0.0;
  for (std::size_t i = 1; i < vis.size(); ++i) {
    path += (vis[i]->position - vis[i - 1]->position).norm();
  }
  if (path < 1e-12) return 0.0;
  const double net = (vis.back()->position - vis.front()->position).norm();
  return std::clamp(1.0 - net / path, 0.0, 1.0);
}

std::map<int, double> normalized_movement(const KeypointDataset& dataset) {
  std::map<int, double> moves;
  for (const auto& [id, track] : dataset.tracks) {
    try {
      moves[id] = average_movement(track);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooSparse) throw;
    }
  }
  if (moves.empty()) {
    throw Error(ErrorCode::kTooSparse, "no track has a computable movement");
  }
  double peak = 0.0;
  for (const auto& [_, m] : moves) peak = std::max(peak, m);
  for (auto& [_, m] : moves) m = peak > 0.0 ? m / peak : 1.0;
  return moves;
}

StabilityCategory classify_stability(const KeypointMetrics& m, int frame_count,
                                     std::optional<double> variance_median) {
  if (m.max_gap_length >= kOccludedGapFraction * frame_count) {
    return StabilityCategory::kOccluded;
  }
  if (m.visibility < kFrequentlyOccludedVisibility) {
    return StabilityCategory::kFrequentlyOccluded;
  }
  if (m.drift_score > kDriftingScore) return StabilityCategory::kDrifting;
  if (m.drift_score > kModerateDriftScore ||
      (variance_median && m.position_variance > *variance_median)) {
    return StabilityCategory::kModeratelyStable;
  }
  return StabilityCategory::kStable;
}

std::vector<StabilityRow> stability_report(const KeypointDataset& dataset) {
  std::vector<StabilityRow> rows;
  for (const auto& [id, track] : dataset.tracks) {
    StabilityRow row;
    row.id = id;
    row.name = track.name;
    row.visibility = visibility(track, std::max(dataset.frame_count, 1));
    row.max_gap_length = max_gap_length(track, dataset.frame_count);
    try {
      KeypointMetrics m;
      m.id = id;
      m.average_movement = average_movement(track);
      m.visibility = row.visibility;
      m.max_gap_length = row.max_gap_length;
      m.position_variance = position_variance(track);
      m.drift_score = drift_score(track);
      row.metrics = m;
    } catch (const Error& e) {
      row.reason = std::string(to_string(e.code()));
    }
    rows.push_back(std::move(row));
  }

  std::vector<double> variances;
  double peak_move = 0.0;
  for (const auto& r : rows) {
    if (!r.metrics) continue;
    variances.push_back(r.metrics->position_variance);
    peak_move = std::max(peak_move, r.metrics->average_movement);
  }
  std::optional<double> median;
  if (!variances.empty()) {
    std::sort(variances.begin(), variances.end());
    const std::size_t n = variances.size();
    median = n % 2 ? variances[n / 2]
                   : 0.5 * (variances[n / 2 - 1] + variances[n / 2]);
  }
  for (auto& r : rows) {
    if (!r.metrics) continue;
    r.metrics->normalized_movement =
        peak_move > 0.0 ? r.metrics->average_movement / peak_move : 1.0;
    r.category = classify_stability(*r.metrics, dataset.frame_count, median);
  }
  return rows;
}

void write_stability_report(const std::vector<StabilityRow>& rows,
                            std::ostream& out) {
  out << "# pos_variance: population variance of visible positions, summed over axes\n"
      << "# drift_score: 1 - net displacement / path length over visible samples\n"
      << "keypoint_id,name,avg_movement,norm_movement,visibility_pct,max_gap,"
         "pos_variance,drift_score,category\n";
  for (const auto& r : rows) {
    out << r.id << ',' << r.name << ',';
    if (r.metrics) {
      out << format_fixed(r.metrics->average_movement, 2) << ','
          << format_fixed(r.metrics->normalized_movement, 2) << ','
          << format_fixed(r.visibility, 2) << ',' << r.max_gap_length << ','
          << format_fixed(r.metrics->position_variance, 2) << ','
          << format_fixed(r.metrics->drift_score, 2) << ','
          << to_string(*r.category) << '\n';
    } else {
      out << ",," << format_fixed(r.visibility, 2) << ',' << r.max_gap_length
          << ",,," << r.reason << '\n';
    }
  }
}

}  // namespace bioright
