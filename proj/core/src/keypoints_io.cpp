#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bioright/error.hpp"
#include "bioright/keypoints.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

namespace {

constexpr std::string_view kHeader2d = "frame,keypoint_id,keypoint_name,x,y,visible";
constexpr std::string_view kHeader3d =
    "frame,keypoint_id,keypoint_name,x,y,z,visible";

Unit parse_unit(std::string_view text) {
  if (text == "pixel") return Unit::kPixel;
  if (text == "meter") return Unit::kMeter;
  throw Error(ErrorCode::kSchemaError,
              "unit must be 'pixel' or 'meter', got '" + std::string(text) + "'");
}

KeypointTrack& track_for(KeypointDataset& ds, int id, std::string_view name) {
  if (id < 1 || id > kKeypointCount) {
    throw Error(ErrorCode::kSchemaError,
                "unknown keypoint id " + std::to_string(id));
  }
  if (keypoint_name(id) != name) {
    throw Error(ErrorCode::kSchemaError,
                "keypoint " + std::to_string(id) + " must be named " +
                    std::string(keypoint_name(id)) + ", got '" +
                    std::string(name) + "'");
  }
  auto [it, inserted] = ds.tracks.try_emplace(id);
  if (inserted) {
    it->second.id = id;
    it->second.name = std::string(name);
  }
  return it->second;
}

// Sort samples, reject duplicates, and fill frames without rows with
// invisible samples.
void densify(KeypointDataset& ds) {
  for (auto& [id, track] : ds.tracks) {
    auto& s = track.samples;
    std::sort(s.begin(), s.end(),
              [](const auto& a, const auto& b) { return a.frame < b.frame; });
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i].frame == s[i - 1].frame) {
        throw Error(ErrorCode::kSchemaError,
                    "duplicate row for keypoint " + std::to_string(id) +
                        " at frame " + std::to_string(s[i].frame));
      }
    }
    std::vector<KeypointSample> dense;
    dense.reserve(static_cast<std::size_t>(ds.frame_count));
    std::size_t k = 0;
    for (int f = 0; f < ds.frame_count; ++f) {
      if (k < s.size() && s[k].frame == f) {
        dense.push_back(s[k++]);
      } else {
        KeypointSample hole;
        hole.frame = f;
        dense.push_back(hole);
      }
    }
    s = std::move(dense);
  }
}

int resolve_frame_count(const std::vector<KeypointTrack*>& tracks,
                        std::optional<int> declared) {
  int max_frame = -1;
  for (const auto* t : tracks) {
    for (const auto& s : t->samples) max_frame = std::max(max_frame, s.frame);
  }
  if (declared) {
    if (*declared < max_frame + 1) {
      throw Error(ErrorCode::kSchemaError,
                  "frame_count smaller than the largest frame index + 1");
    }
    return *declared;
  }
  return max_frame + 1;
}

KeypointDataset load_csv(std::istream& in) {
  KeypointDataset ds;
  std::optional<int> declared_count;
  std::optional<Unit> declared_unit;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool any_row = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;

    if (view.front() == '#') {
      if (have_header) continue;
      const auto body = trim(view.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "frame_rate") {
        double fr = 0.0;
        if (!parse_double(value, fr) || !(fr > 0.0)) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line_no) + ": bad frame_rate");
        }
        ds.frame_rate = fr;
      } else if (key == "frame_count") {
        int fc = 0;
        if (!parse_int(value, fc) || fc < 0) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line_no) + ": bad frame_count");
        }
        declared_count = fc;
      } else if (key == "unit") {
        declared_unit = parse_unit(value);
      }
      continue;
    }

    if (!have_header) {
      if (view == kHeader2d) {
        ds.dimension = 2;
      } else if (view == kHeader3d) {
        ds.dimension = 3;
      } else {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": unexpected header '" +
                        std::string(view) + "'");
      }
      have_header = true;
      continue;
    }

    const auto fields = split(view, ',');
    const std::size_t expected = ds.dimension == 3 ? 7 : 6;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParseError,
                   "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != expected) {
      throw fail("expected " + std::to_string(expected) + " fields, got " +
                 std::to_string(fields.size()));
    }
    KeypointSample sample;
    int id = 0;
    if (!parse_int(fields[0], sample.frame) || sample.frame < 0) {
      throw fail("bad frame index");
    }
    if (!parse_int(fields[1], id)) throw fail("bad keypoint id");
    double x = 0, y = 0, z = 0;
    if (!parse_double(fields[3], x) || !parse_double(fields[4], y)) {
      throw fail("bad coordinate");
    }
    if (ds.dimension == 3 && !parse_double(fields[5], z)) {
      throw fail("bad coordinate");
    }
    const auto vis = trim(fields[expected - 1]);
    if (vis == "1") {
      sample.visible = true;
    } else if (vis != "0") {
      throw fail("visible must be 0 or 1");
    }
    sample.position = Vec3(x, y, z);
    track_for(ds, id, trim(fields[2])).samples.push_back(sample);
    any_row = true;
  }

  if (!any_row) throw Error(ErrorCode::kEmptyDataset, "dataset has no rows");

  std::vector<KeypointTrack*> ptrs;
  for (auto& [_, t] : ds.tracks) ptrs.push_back(&t);
  ds.frame_count = resolve_frame_count(ptrs, declared_count);
  ds.unit = declared_unit.value_or(ds.dimension == 3 ? Unit::kMeter : Unit::kPixel);
  densify(ds);
  validate(ds);
  return ds;
}

KeypointDataset load_json(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("JSON: ") + e.what());
  }
  KeypointDataset ds;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kSchemaError, "JSON root must be an object");
    if (const auto& fr = doc.at("frame_rate"); !fr.is_null()) {
      ds.frame_rate = fr.get<double>();
    }
    const int declared = doc.at("frame_count").get<int>();
    ds.unit = parse_unit(doc.at("unit").get<std::string>());
    const auto& tracks = doc.at("tracks");
    if (!tracks.is_array() || tracks.empty()) {
      throw Error(ErrorCode::kEmptyDataset, "dataset has no tracks");
    }
    bool has_z = false;
    bool any_sample = false;
    for (const auto& t : tracks) {
      const int id = t.at("id").get<int>();
      const auto name = t.at("name").get<std::string>();
      if (ds.tracks.contains(id)) {
        throw Error(ErrorCode::kSchemaError,
                    "duplicate track id " + std::to_string(id));
      }
      auto& track = track_for(ds, id, name);
      for (const auto& s : t.at("samples")) {
        KeypointSample sample;
        sample.frame = s.at("frame").get<int>();
        double z = 0.0;
        if (s.contains("z")) {
          z = s.at("z").get<double>();
          has_z = true;
        }
        sample.position = Vec3(s.at("x").get<double>(), s.at("y").get<double>(), z);
        const auto& vis = s.at("visible");
        sample.visible = vis.is_boolean() ? vis.get<bool>() : vis.get<int>() != 0;
        sample.interpolated = s.value("interpolated", false);
        track.samples.push_back(sample);
        any_sample = true;
      }
    }
    if (!any_sample) throw Error(ErrorCode::kEmptyDataset, "dataset has no samples");
    ds.dimension = has_z ? 3 : 2;
    std::vector<KeypointTrack*> ptrs;
    for (auto& [_, t] : ds.tracks) ptrs.push_back(&t);
    ds.frame_count = resolve_frame_count(ptrs, declared);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("JSON: ") + e.what());
  }
  densify(ds);
  validate(ds);
  return ds;
}

}  // namespace

KeypointDataset load_dataset(std::istream& source, DatasetFormat format,
                             const LoadOptions& options) {
  KeypointDataset ds =
      format == DatasetFormat::kCsv ? load_csv(source) : load_json(source);
  if (options.frame_rate) {
    if (!(*options.frame_rate > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "frame_rate must be positive");
    }
    ds.frame_rate = options.frame_rate;
  }
  return ds;
}

KeypointDataset load_dataset_file(const std::string& path,
                                  const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return load_dataset(in, json ? DatasetFormat::kJson : DatasetFormat::kCsv,
                      options);
}

void save_dataset(const KeypointDataset& ds, std::ostream& out,
                  DatasetFormat format) {
  validate(ds);
  if (format == DatasetFormat::kCsv) {
    if (ds.frame_rate) out << "# frame_rate=" << format_shortest(*ds.frame_rate) << '\n';
    out << "# frame_count=" << ds.frame_count << '\n';
    out << "# unit=" << to_string(ds.unit) << '\n';
    out << (ds.dimension == 3 ? kHeader3d : kHeader2d) << '\n';
    // Rows ordered by (frame, id).
    for (int f = 0; f < ds.frame_count; ++f) {
      for (const auto& [id, track] : ds.tracks) {
        auto it = std::lower_bound(
            track.samples.begin(), track.samples.end(), f,
            [](const auto& s, int frame) { return s.frame < frame; });
        if (it == track.samples.end() || it->frame != f) continue;
        out << f << ',' << id << ',' << track.name << ','
            << format_shortest(it->position.x()) << ','
            << format_shortest(it->position.y()) << ',';
        if (ds.dimension == 3) out << format_shortest(it->position.z()) << ',';
        out << (it->visible ? 1 : 0) << '\n';
      }
    }
    return;
  }

  using nlohmann::ordered_json;
  ordered_json doc;
  doc["frame_rate"] = ds.frame_rate ? ordered_json(*ds.frame_rate) : ordered_json(nullptr);
  doc["frame_count"] = ds.frame_count;
  doc["unit"] = std::string(to_string(ds.unit));
  doc["tracks"] = ordered_json::array();
  for (const auto& [id, track] : ds.tracks) {
    ordered_json t;
    t["id"] = id;
    t["name"] = track.name;
    t["samples"] = ordered_json::array();
    for (const auto& s : track.samples) {
      ordered_json js;
      js["frame"] = s.frame;
      js["x"] = s.position.x();
      js["y"] = s.position.y();
      if (ds.dimension == 3) js["z"] = s.position.z();
      js["visible"] = s.visible;
      if (s.interpolated) js["interpolated"] = true;
      t["samples"].push_back(std::move(js));
    }
    doc["tracks"].push_back(std::move(t));
  }
  out << doc.dump(1) << '\n';
}

}  // namespace bioright
