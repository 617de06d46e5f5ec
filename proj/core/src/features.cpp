#include "ambientis/features.hpp"

#include <fstream>

#include "json.hpp"

#include "ambientis/errors.hpp"

namespace ambientis {

namespace {

using Json = nlohmann::ordered_json;

}  // namespace

std::string feature_to_json_line(const FrameFeatures& f) {
  Json j;
  j["timestamp_ms"] = f.timestamp_ms;
  j["present"] = f.present;
  if (f.posture) {
    j["posture"] = {{"label", posture_name(f.posture->label)},
                    {"confidence", f.posture->confidence}};
  }
  if (f.motion) {
    j["motion"] = {{"inactive", f.motion->inactive},
                   {"movement_scale", f.motion->movement_scale},
                   {"movement_speed", f.motion->movement_speed}};
  }
  return j.dump();
}

FrameFeatures feature_from_json_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("feature record is not a JSON object");
  if (!j.contains("timestamp_ms") || !j["timestamp_ms"].is_number_integer()) {
    throw FormatError("feature record needs an integer 'timestamp_ms'");
  }
  if (!j.contains("present") || !j["present"].is_boolean()) {
    throw FormatError("feature record needs a boolean 'present'");
  }

  FrameFeatures f;
  f.timestamp_ms = j["timestamp_ms"].get<std::int64_t>();
  f.present = j["present"].get<bool>();

  if (j.contains("posture")) {
    const Json& p = j["posture"];
    if (!p.is_object() || !p.contains("label") || !p["label"].is_string() ||
        !p.contains("confidence") || !p["confidence"].is_number()) {
      throw FormatError("'posture' needs a string label and numeric confidence");
    }
    const auto label = parse_posture(p["label"].get<std::string>());
    if (!label) {
      throw FormatError("unknown posture label '" + p["label"].get<std::string>() +
                        "'");
    }
    const double confidence = p["confidence"].get<double>();
    if (confidence < 0.0 || confidence > 1.0) {
      throw FormatError("posture confidence outside [0, 1]");
    }
    if (!f.present) throw FormatError("'posture' on a frame with present = false");
    f.posture = PostureLabel{*label, confidence};
  }

  if (j.contains("motion")) {
    const Json& m = j["motion"];
    if (!m.is_object() || !m.contains("inactive") || !m["inactive"].is_boolean() ||
        !m.contains("movement_scale") || !m["movement_scale"].is_number() ||
        !m.contains("movement_speed") || !m["movement_speed"].is_number()) {
      throw FormatError(
          "'motion' needs boolean inactive and numeric movement_scale/speed");
    }
    const double scale = m["movement_scale"].get<double>();
    const double speed = m["movement_speed"].get<double>();
    if (scale < 0.0 || scale > 1.0) {
      throw FormatError("movement_scale outside [0, 1]");
    }
    if (speed < 0.0) throw FormatError("movement_speed is negative");
    if (!f.present) throw FormatError("'motion' on a frame with present = false");
    f.motion = MotionFeatures{m["inactive"].get<bool>(), scale, speed};
  }
  return f;
}

void write_features_jsonl(const std::string& path,
                          const std::vector<FrameFeatures>& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  for (const FrameFeatures& f : features) {
    out << feature_to_json_line(f) << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

std::vector<FrameFeatures> read_features_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  std::vector<FrameFeatures> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(feature_from_json_line(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ambientis
