#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ambientis/frame.hpp"
#include "ambientis/geometry.hpp"
#include "ambientis/posture.hpp"

namespace ambientis {

struct GroundTruthLedger;  // simulator.hpp

// Both detectors report into this shape: the pose detector supplies
// keypoints, the object detector supplies the body bounding box.
struct DetectorOutput {
  double person_probability = 0.0;            // in [0, 1]
  std::optional<PixelRect> body_bbox;
  std::vector<Keypoint> keypoints;            // empty when the detector has none
  bool failed = false;                        // diagnostic: detector could not run
};

// Per-frame presence decision with the fused evidence that produced it.
struct PresenceRecord {
  std::int64_t timestamp_ms = 0;
  bool present = false;
  double p_pose = 0.0;
  double p_obj = 0.0;
  std::optional<PixelRect> body_bbox;  // set whenever present
  std::vector<Keypoint> keypoints;
};

// Presence requires BOTH detectors strictly above this probability.
// "Over 50%" is read as strict; tests pin the boundary.
inline constexpr double kPresenceThreshold = 0.5;

// True iff both probabilities strictly exceed kPresenceThreshold.
// Throws std::invalid_argument if either lies outside [0, 1].
bool fuse_presence(double p_pose, double p_obj);

// In-process detector plug-in: frame in, DetectorOutput out. Implementations
// may keep internal noise streams, so detect() is non-const; a detector that
// cannot run reports probability 0 with failed = true rather than throwing.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectorOutput detect(const RawFrame& frame) = 0;
  virtual std::string name() const = 0;
};

using DetectorHandle = std::unique_ptr<Detector>;

// What a detector factory gets to work with. Scenario-channel detectors
// read simulator ground truth (with configurable probability jitter);
// pixel detectors ignore the ledger.
struct DetectorContext {
  const GroundTruthLedger* ledger = nullptr;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
};

using DetectorFactory = std::function<DetectorHandle(const DetectorContext&)>;

// Registry keyed by name. Shipped baselines:
//   "scenario-pose"    ground-truth keypoints + probability (ledger required)
//   "scenario-object"  ground-truth body bbox + probability (ledger required)
//   "blob"             naive luminance-blob detector over the pixels
// make_detector throws InputError for unknown names or a missing ledger.
void register_detector(const std::string& name, DetectorFactory factory);
DetectorHandle make_detector(const std::string& name, const DetectorContext& ctx);
std::vector<std::string> registered_detectors();

// Runs both detectors on one frame.
std::pair<DetectorOutput, DetectorOutput> run_detectors(const RawFrame& frame,
                                                        Detector& pose_detector,
                                                        Detector& obj_detector);

// Fuses the two outputs into a PresenceRecord. When both detectors supply a
// bbox the object detector's wins; when neither does but the frame fused
// present (possible only under noise), a frame-centered fallback bbox keeps
// the "present implies bbox" invariant.
PresenceRecord make_presence_record(std::int64_t timestamp_ms,
                                    const DetectorOutput& pose,
                                    const DetectorOutput& obj,
                                    int frame_width, int frame_height);

}  // namespace ambientis
