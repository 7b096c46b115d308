#include "bioright/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Geometry>

#include "bioright/error.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

namespace {

constexpr double kTimeTol = 1e-9;

const Vec3& require(const KeypointPositions& p, int id) {
  auto it = p.find(id);
  if (it == p.end()) {
    throw Error(ErrorCode::kMissingKeypoint,
                "keypoint " + std::to_string(id) + " (" +
                    std::string(keypoint_name(id)) + ") not available");
  }
  return it->second;
}

Vec3 axis(const KeypointPositions& p, std::pair<int, int> from_to) {
  return require(p, from_to.second) - require(p, from_to.first);
}

}  // namespace

std::string_view to_string(Segment segment) {
  switch (segment) {
    case Segment::kBody: return "body";
    case Segment::kTail: return "tail";
    case Segment::kLeftFrontLeg: return "left_front";
    case Segment::kLeftHindLeg: return "left_hind";
    case Segment::kRightFrontLeg: return "right_front";
    case Segment::kRightHindLeg: return "right_hind";
  }
  return "unknown";
}

std::optional<Segment> parse_segment(std::string_view text) {
  for (Segment s : {Segment::kBody, Segment::kTail, Segment::kLeftFrontLeg,
                    Segment::kLeftHindLeg, Segment::kRightFrontLeg,
                    Segment::kRightHindLeg}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_leg(Segment segment) {
  return segment != Segment::kBody && segment != Segment::kTail;
}

SegmentDefinition segment_definition(Segment segment, LegReference ref) {
  SegmentDefinition def;
  def.segment = segment;
  def.leg_reference = ref;
  switch (segment) {
    case Segment::kBody:
      def.primary = {kp::kVent, kp::kNeck};
      def.companion = std::pair{kp::kShoulderRight, kp::kShoulderLeft};
      break;
    case Segment::kTail:
      def.primary = {kp::kVent, kp::kTailTip};
      def.companion = std::pair{kp::kHipLeft, kp::kHipRight};
      break;
    // Right legs run wrist -> shoulder/hip, left legs shoulder/hip -> wrist.
    case Segment::kRightFrontLeg:
      def.primary = {kp::kWristRight, kp::kShoulderRight};
      break;
    case Segment::kRightHindLeg:
      def.primary = {kp::kAnkleRight, kp::kHipRight};
      break;
    case Segment::kLeftFrontLeg:
      def.primary = {kp::kShoulderLeft, kp::kWristLeft};
      break;
    case Segment::kLeftHindLeg:
      def.primary = {kp::kHipLeft, kp::kAnkleLeft};
      break;
  }
  return def;
}

Rotation body_frame(const KeypointPositions& positions) {
  return segment_frame(segment_definition(Segment::kBody), positions);
}

Rotation tail_frame(const KeypointPositions& positions) {
  return segment_frame(segment_definition(Segment::kTail), positions);
}

Rotation leg_frame(Segment leg, const KeypointPositions& positions,
                   LegReference reference, const std::optional<Vec3>& body_x) {
  if (!is_leg(leg)) {
    throw Error(ErrorCode::kInvalidArgument, "leg_frame called for non-leg");
  }
  const auto def = segment_definition(leg, reference);
  const Vec3 y_raw = axis(positions, def.primary);
  if (!(y_raw.norm() > kAxisEpsilon)) {
    throw Error(ErrorCode::kDegenerateAxes, "leg axis has zero length");
  }
  const Vec3 y = y_raw.normalized();

  Vec3 x_ref = Vec3::UnitX();
  if (reference == LegReference::kBodyX) {
    if (!body_x) {
      throw Error(ErrorCode::kInvalidArgument, "body x axis required");
    }
    x_ref = body_x->normalized();
  }
  const Vec3 z_raw = x_ref.cross(y);
  if (!(z_raw.norm() > kAxisEpsilon)) {
    throw Error(ErrorCode::kDegenerateAxes,
                "leg axis parallel to the reference x axis");
  }
  const Vec3 z = z_raw.normalized();
  const Vec3 x = y.cross(z);

  Mat3 m;
  m.row(0) = x.transpose();
  m.row(1) = y.transpose();
  m.row(2) = z.transpose();
  return Rotation(m);
}

Rotation segment_frame(const SegmentDefinition& def,
                       const KeypointPositions& positions) {
  if (is_leg(def.segment)) {
    std::optional<Vec3> body_x;
    if (def.leg_reference == LegReference::kBodyX) {
      body_x = body_frame(positions).row(0);
    }
    return leg_frame(def.segment, positions, def.leg_reference, body_x);
  }
  return dcm_from_axes(axis(positions, def.primary),
                       axis(positions, *def.companion));
}

KeypointPositions positions_at(const KeypointDataset& dataset, int frame) {
  KeypointPositions out;
  for (const auto& [id, track] : dataset.tracks) {
    auto it = std::lower_bound(
        track.samples.begin(), track.samples.end(), frame,
        [](const auto& s, int f) { return s.frame < f; });
    if (it != track.samples.end() && it->frame == frame && it->visible) {
      out[id] = it->position;
    }
  }
  return out;
}

void refresh_euler(SegmentFrameSeries& series) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> yaw, pitch, roll;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.valid[i]) continue;
    const auto e = dcm_to_euler321(series.rotations[i]);
    yaw.push_back(e.yaw);
    pitch.push_back(e.pitch);
    roll.push_back(e.roll);
    index.push_back(i);
  }
  series.euler.assign(series.size(), EulerYPR{nan, nan, nan});
  if (index.empty()) return;
  yaw = unwrap_angles(yaw);
  roll = unwrap_angles(roll);
  for (std::size_t k = 0; k < index.size(); ++k) {
    series.euler[index[k]] = EulerYPR{yaw[k], pitch[k], roll[k]};
  }
}

SegmentFrameSeries segment_series(const KeypointDataset& dataset,
                                  const SegmentDefinition& def) {
  if (dataset.unit != Unit::kMeter || dataset.dimension != 3) {
    throw Error(ErrorCode::kSchemaError,
                "segment frames need a 3D dataset in meters");
  }
  if (!dataset.frame_rate) {
    throw Error(ErrorCode::kSchemaError, "dataset has no frame_rate");
  }
  SegmentFrameSeries out;
  out.segment = def.segment;
  bool any_valid = false;
  for (int f = 0; f < dataset.frame_count; ++f) {
    out.times.push_back(f / *dataset.frame_rate);
    try {
      out.rotations.push_back(segment_frame(def, positions_at(dataset, f)));
      out.valid.push_back(true);
      any_valid = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingKeypoint &&
          e.code() != ErrorCode::kDegenerateAxes) {
        throw;
      }
      out.rotations.push_back(Rotation::identity());
      out.valid.push_back(false);
    }
  }
  if (!any_valid) {
    throw Error(ErrorCode::kNoValidFrames,
                "no frame yields a valid " + std::string(to_string(def.segment)) +
                    " frame");
  }
  refresh_euler(out);
  return out;
}

SegmentFrameSeries relative_leg_series(const SegmentFrameSeries& leg,
                                       const SegmentFrameSeries& body) {
  if (leg.size() != body.size()) {
    throw Error(ErrorCode::kTimeGridMismatch, "series lengths differ");
  }
  for (std::size_t i = 0; i < leg.size(); ++i) {
    if (std::abs(leg.times[i] - body.times[i]) > kTimeTol) {
      throw Error(ErrorCode::kTimeGridMismatch, "series time grids differ");
    }
  }
  SegmentFrameSeries out;
  out.segment = leg.segment;
  out.times = leg.times;
  for (std::size_t i = 0; i < leg.size(); ++i) {
    const bool ok = leg.valid[i] && body.valid[i];
    out.valid.push_back(ok);
    out.rotations.push_back(
        ok ? relative_rotation(leg.rotations[i], body.rotations[i])
           : Rotation::identity());
  }
  refresh_euler(out);
  return out;
}

SegmentFrameSeries righting_window(const SegmentFrameSeries& series,
                                   double t_start, double t_end) {
  if (!(t_start < t_end) || series.size() == 0 ||
      t_end < series.times.front() - kTimeTol ||
      t_start > series.times.back() + kTimeTol) {
    throw Error(ErrorCode::kEmptyWindow, "window does not overlap the series");
  }
  SegmentFrameSeries out;
  out.segment = series.segment;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < t_start - kTimeTol || t > t_end + kTimeTol) continue;
    out.times.push_back(t - t_start);
    out.rotations.push_back(series.rotations[i]);
    out.euler.push_back(series.euler[i]);
    out.valid.push_back(series.valid[i]);
  }
  if (out.size() == 0) {
    throw Error(ErrorCode::kEmptyWindow, "window contains no samples");
  }
  return out;
}

void write_series_csv(const SegmentFrameSeries& series, std::ostream& out) {
  out << "t,yaw_deg,pitch_deg,roll_deg,valid\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& e = series.euler[i];
    out << format_fixed(series.times[i], 6) << ','
        << format_fixed(rad2deg(e.yaw), 4) << ','
        << format_fixed(rad2deg(e.pitch), 4) << ','
        << format_fixed(rad2deg(e.roll), 4) << ','
        << (series.valid[i] ? 1 : 0) << '\n';
  }
}

}  // namespace bioright
