#include "bioright/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "bioright/error.hpp"

namespace bioright {

std::string_view keypoint_name(int id) {
  if (id < 1 || id > kKeypointCount) {
    throw Error(ErrorCode::kSchemaError,
                "keypoint id " + std::to_string(id) + " outside 1..23");
  }
  return kKeypointNames[static_cast<std::size_t>(id - 1)];
}

std::optional<int> keypoint_id(std::string_view name) {
  for (std::size_t i = 0; i < kKeypointNames.size(); ++i) {
    if (kKeypointNames[i] == name) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::string_view to_string(Unit unit) {
  return unit == Unit::kPixel ? "pixel" : "meter";
}

std::size_t KeypointTrack::visible_count() const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const auto& s) { return s.visible; }));
}

void validate(const KeypointDataset& dataset) {
  if (dataset.dimension != 2 && dataset.dimension != 3) {
    throw Error(ErrorCode::kSchemaError, "dimension must be 2 or 3");
  }
  if (dataset.frame_rate && !(*dataset.frame_rate > 0.0)) {
    throw Error(ErrorCode::kSchemaError, "frame_rate must be positive");
  }
  for (const auto& [id, track] : dataset.tracks) {
    if (id != track.id) {
      throw Error(ErrorCode::kSchemaError, "track map key differs from id");
    }
    if (keypoint_name(id) != track.name) {
      throw Error(ErrorCode::kSchemaError,
                  "keypoint " + std::to_string(id) + " must be named " +
                      std::string(keypoint_name(id)) + ", got " + track.name);
    }
    int prev = -1;
    for (const auto& s : track.samples) {
      if (s.frame <= prev) {
        throw Error(ErrorCode::kSchemaError,
                    "frames not strictly increasing in track " + track.name);
      }
      if (s.frame < 0 || s.frame >= dataset.frame_count) {
        throw Error(ErrorCode::kSchemaError,
                    "frame " + std::to_string(s.frame) + " outside frame_count");
      }
      if (dataset.dimension == 2 && s.position.z() != 0.0) {
        throw Error(ErrorCode::kSchemaError, "2D dataset with non-zero z");
      }
      prev = s.frame;
    }
  }
}

// ---------------------------------------------------------------------------
// Identity re-association

namespace {

struct Candidate {
  double distance;
  int target;
  int source;
};

}  // namespace

Reassociation reassociate_identities(const KeypointDataset& dataset,
                                     double max_jump) {
  if (dataset.dimension != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "identity re-association expects 2D image data");
  }
  Reassociation result;
  result.dataset = dataset;
  auto& tracks = result.dataset.tracks;

  // raw label -> corrected track id; starts as identity.
  std::map<int, int> label_to_track;
  for (const auto& [id, _] : tracks) label_to_track[id] = id;

  std::map<int, Vec3> last_known;
  std::map<int, std::size_t> cursor;  // per-track index into samples
  for (const auto& [id, _] : tracks) cursor[id] = 0;

  for (int frame = 0; frame < dataset.frame_count; ++frame) {
    // Raw detections in this frame keyed by raw label.
    std::map<int, KeypointSample> raw;
    for (const auto& [id, track] : dataset.tracks) {
      std::size_t& c = cursor[id];
      while (c < track.samples.size() && track.samples[c].frame < frame) ++c;
      if (c < track.samples.size() && track.samples[c].frame == frame) {
        raw[id] = track.samples[c];
      }
    }

    // Apply the persistent permutation.
    std::map<int, KeypointSample> assigned;
    for (const auto& [label, sample] : raw) {
      assigned[label_to_track[label]] = sample;
    }

    std::vector<int> flagged;
    for (const auto& [id, sample] : assigned) {
      if (!sample.visible) continue;
      auto it = last_known.find(id);
      if (it != last_known.end() &&
          (sample.position - it->second).norm() > max_jump) {
        flagged.push_back(id);
      }
    }

    if (!flagged.empty()) {
      // Targets: flagged tracks plus tracks with history that are not
      // visible in this frame.
      std::vector<int> targets = flagged;
      for (const auto& [id, pos] : last_known) {
        auto it = assigned.find(id);
        const bool visible_here = it != assigned.end() && it->second.visible;
        if (!visible_here) targets.push_back(id);
      }
      std::sort(targets.begin(), targets.end());

      std::vector<Candidate> candidates;
      for (int src : flagged) {
        for (int dst : targets) {
          candidates.push_back(
              {(assigned[src].position - last_known[dst]).norm(), dst, src});
        }
      }
      std::sort(candidates.begin(), candidates.end(),
                [](const Candidate& a, const Candidate& b) {
                  return std::tie(a.distance, a.target, a.source) <
                         std::tie(b.distance, b.target, b.source);
                });

      std::map<int, int> match;  // source track -> destination track
      std::vector<int> used_targets;
      for (const auto& cand : candidates) {
        if (match.contains(cand.source)) continue;
        if (std::find(used_targets.begin(), used_targets.end(), cand.target) !=
            used_targets.end()) {
          continue;
        }
        match[cand.source] = cand.target;
        used_targets.push_back(cand.target);
      }

      // Complete the source->target bijection into a permutation so each
      // raw label keeps exactly one track: targets that were not sources
      // hand their (invisible) slot to the vacated sources.
      std::map<int, int> perm = match;
      std::vector<int> vacated, incoming;
      for (const auto& [src, dst] : match) {
        if (!match.contains(dst)) incoming.push_back(dst);
        if (std::find(used_targets.begin(), used_targets.end(), src) ==
            used_targets.end()) {
          vacated.push_back(src);
        }
      }
      std::sort(vacated.begin(), vacated.end());
      std::sort(incoming.begin(), incoming.end());
      for (std::size_t i = 0; i < incoming.size(); ++i) {
        perm[incoming[i]] = vacated[i];
      }

      JumpEvent swap{frame, JumpKind::kSwap, {}};
      std::map<int, KeypointSample> moved;
      for (const auto& [from, to] : perm) {
        if (from != to && match.contains(from)) swap.moves.emplace_back(from, to);
        auto it = assigned.find(from);
        if (it != assigned.end()) {
          moved[to] = it->second;
        } else {
          KeypointSample hole;
          hole.frame = frame;
          moved[to] = hole;
        }
      }
      for (auto& [id, sample] : moved) assigned[id] = sample;

      if (!swap.moves.empty()) {
        for (auto& [label, tid] : label_to_track) {
          auto it = perm.find(tid);
          if (it != perm.end()) tid = it->second;
        }
        result.report.push_back(swap);
      }
      for (const auto& [src, dst] : match) {
        if (src == dst) {
          result.report.push_back(
              {frame, JumpKind::kUnresolved, {{src, src}}});
        }
      }
    }

    // Write the corrected frame back and refresh last-known positions.
    for (auto& [id, track] : tracks) {
      auto s_it = std::find_if(track.samples.begin(), track.samples.end(),
                               [&](const auto& s) { return s.frame == frame; });
      auto a_it = assigned.find(id);
      if (a_it != assigned.end()) {
        KeypointSample sample = a_it->second;
        sample.frame = frame;
        if (s_it != track.samples.end()) {
          *s_it = sample;
        } else {
          track.samples.insert(
              std::upper_bound(track.samples.begin(), track.samples.end(),
                               frame,
                               [](int f, const auto& s) { return f < s.frame; }),
              sample);
        }
      } else if (s_it != track.samples.end()) {
        s_it->visible = false;
      }
      if (a_it != assigned.end() && a_it->second.visible) {
        last_known[id] = a_it->second.position;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

KeypointTrack interpolate_gaps(const KeypointTrack& track, int max_gap) {
  if (track.visible_count() < 2) {
    throw Error(ErrorCode::kTooSparse,
                "gap interpolation needs two visible samples in " + track.name);
  }
  KeypointTrack out = track;
  auto& s = out.samples;
  std::optional<std::size_t> prev_visible;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].visible) continue;
    if (prev_visible && i - *prev_visible > 1) {
      const std::size_t a = *prev_visible;
      const int frame_gap = s[i].frame - s[a].frame - 1;
      if (frame_gap <= max_gap) {
        const double span = s[i].frame - s[a].frame;
        for (std::size_t j = a + 1; j < i; ++j) {
          const double u = (s[j].frame - s[a].frame) / span;
          s[j].position = (1.0 - u) * s[a].position + u * s[i].position;
          s[j].visible = true;
          s[j].interpolated = true;
        }
      }
    }
    prev_visible = i;
  }
  return out;
}

// ---------------------------------------------------------------------------

Vec3 pixel_to_world(const Eigen::Vector2d& pixel, const PlanarCalibration& c) {
  const Eigen::Vector2d d = (pixel - c.origin_pixel) * c.scale;
  return {d.x(), c.image_y_down ? -d.y() : d.y(), 0.0};
}

Eigen::Vector2d world_to_pixel(const Vec3& world, const PlanarCalibration& c) {
  const double v = c.image_y_down ? -world.y() : world.y();
  return Eigen::Vector2d(world.x(), v) / c.scale + c.origin_pixel;
}

KeypointDataset pixel_to_world(const KeypointDataset& dataset,
                               const PlanarCalibration& calib) {
  if (dataset.unit == Unit::kMeter) {
    throw Error(ErrorCode::kAlreadyWorldUnits, "dataset is already in meters");
  }
  if (dataset.dimension != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "planar calibration applies to 2D image data");
  }
  if (!(calib.scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "calibration scale must be > 0");
  }
  KeypointDataset out = dataset;
  out.unit = Unit::kMeter;
  out.dimension = 3;
  for (auto& [_, track] : out.tracks) {
    for (auto& s : track.samples) {
      s.position = pixel_to_world(s.position.head<2>(), calib);
    }
  }
  return out;
}

}  // namespace bioright
