#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ambientis/motion.hpp"
#include "ambientis/posture.hpp"

namespace ambientis {

// The anonymized per-frame record -- the only thing that survives a frame.
// Posture and motion are set only for present frames; motion is additionally
// absent on the first frame of a stream (no previous frame to difference).
struct FrameFeatures {
  std::int64_t timestamp_ms = 0;
  bool present = false;
  std::optional<PostureLabel> posture;
  std::optional<MotionFeatures> motion;
};

// One JSON object per line:
//   {"timestamp_ms":...,"present":true,
//    "posture":{"label":"standing","confidence":0.9},
//    "motion":{"inactive":false,"movement_scale":0.25,"movement_speed":1.4}}
// posture/motion are omitted when absent.
std::string feature_to_json_line(const FrameFeatures& f);

// Throws FormatError on malformed JSON or missing/invalid fields.
FrameFeatures feature_from_json_line(const std::string& line);

void write_features_jsonl(const std::string& path,
                          const std::vector<FrameFeatures>& features);

// Reads a features JSONL file; FormatError messages carry the 1-based line
// number of the offending record.
std::vector<FrameFeatures> read_features_jsonl(const std::string& path);

}  // namespace ambientis
