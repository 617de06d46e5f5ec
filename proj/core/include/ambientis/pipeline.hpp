#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ambientis/detectors.hpp"
#include "ambientis/features.hpp"
#include "ambientis/frame.hpp"
#include "ambientis/optical_flow.hpp"
#include "ambientis/posture.hpp"

namespace ambientis {

enum class SpeedDomain { Bbox, Active };

const char* speed_domain_name(SpeedDomain d);
std::optional<SpeedDomain> parse_speed_domain(const std::string& name);

struct PipelineConfig {
  std::string pose_detector = "blob";
  std::string object_detector = "blob";
  std::string classifier = "geometric-baseline";
  int active_threshold = 90;
  SpeedDomain speed_domain = SpeedDomain::Bbox;
  int tz_offset_min = 0;
  double detector_noise_sigma = 0.0;
  std::uint64_t detector_noise_seed = 0;
  std::string ledger_path;  // sidecar ledger for scenario detectors
  FlowParams flow;
};

// Reads a flat key = value config file (keys documented in the README).
// Throws InputError / FormatError.
PipelineConfig parse_pipeline_config(const std::string& path);

// Push-based per-frame feature extraction. Holds at most one previous frame
// (differencing and flow need it), so together with the caller's current
// frame the pipeline keeps two pixel buffers in flight. Frames fed in are
// consumed: each is scrubbed as soon as the following frame replaces it,
// and the last one when the extractor is destroyed.
//
// Per frame: run both detectors, fuse presence; when present, classify
// posture from the pose keypoints, and compute motion features against the
// previous frame (absent on the first frame of a stream). Absent frames
// produce neither posture nor motion.
class FeatureExtractor {
 public:
  // The ledger, when given, feeds scenario-channel detectors.
  FeatureExtractor(const PipelineConfig& config,
                   const GroundTruthLedger* ledger = nullptr);
  ~FeatureExtractor();

  FrameFeatures process(RawFrame&& frame);

  // Timestamp-ordering guard mirrored from the stream contract.
  std::int64_t frames_seen() const { return frames_seen_; }

 private:
  PipelineConfig config_;
  DetectorHandle pose_;
  DetectorHandle obj_;
  ClassifierHandle classifier_;
  std::optional<RawFrame> prev_;
  std::int64_t frames_seen_ = 0;
  std::int64_t last_ts_ = 0;
};

// Drains a stream through the extractor.
std::vector<FrameFeatures> run_pipeline(FrameStream& stream,
                                        const PipelineConfig& config,
                                        const GroundTruthLedger* ledger = nullptr);

}  // namespace ambientis
