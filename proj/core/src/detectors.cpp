#include "ambientis/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "ambientis/errors.hpp"
#include "ambientis/rng.hpp"
#include "ambientis/simulator.hpp"

namespace ambientis {

bool fuse_presence(double p_pose, double p_obj) {
  if (!(p_pose >= 0.0 && p_pose <= 1.0)) {
    throw std::invalid_argument("pose probability outside [0, 1]");
  }
  if (!(p_obj >= 0.0 && p_obj <= 1.0)) {
    throw std::invalid_argument("object probability outside [0, 1]");
  }
  return p_pose > kPresenceThreshold && p_obj > kPresenceThreshold;
}

namespace {

// Baseline probabilities the scenario detectors report before jitter.
constexpr double kScenarioPresentP = 0.95;
constexpr double kScenarioAbsentP = 0.03;

double jittered(double base, double sigma, std::uint64_t seed,
                std::uint64_t timestamp, std::uint64_t channel) {
  if (sigma <= 0.0) return base;
  Rng rng(hash_mix(seed, timestamp, channel));
  return std::clamp(base + sigma * rng.next_gaussian(), 0.0, 1.0);
}

std::optional<PixelRect> keypoint_bbox(const std::vector<Keypoint>& kps,
                                       int frame_w, int frame_h) {
  if (kps.empty()) return std::nullopt;
  double x0 = kps[0].x, x1 = kps[0].x, y0 = kps[0].y, y1 = kps[0].y;
  for (const Keypoint& kp : kps) {
    x0 = std::min(x0, kp.x);
    x1 = std::max(x1, kp.x);
    y0 = std::min(y0, kp.y);
    y1 = std::max(y1, kp.y);
  }
  const int pad = 2;
  PixelRect r{static_cast<int>(std::floor(x0)) - pad,
              static_cast<int>(std::floor(y0)) - pad,
              static_cast<int>(std::ceil(x1 - x0)) + 2 * pad,
              static_cast<int>(std::ceil(y1 - y0)) + 2 * pad};
  const PixelRect clamped = clamp_to_frame(r, frame_w, frame_h);
  if (clamped.empty()) return std::nullopt;
  return clamped;
}

class ScenarioPoseDetector final : public Detector {
 public:
  explicit ScenarioPoseDetector(const DetectorContext& ctx)
      : ledger_(ctx.ledger), sigma_(ctx.noise_sigma), seed_(ctx.noise_seed) {}

  DetectorOutput detect(const RawFrame& frame) override {
    DetectorOutput out;
    const FrameTruth* truth = ledger_->find(frame.timestamp_ms);
    if (truth == nullptr) {
      out.failed = true;
      return out;
    }
    const double base = truth->present ? kScenarioPresentP : kScenarioAbsentP;
    out.person_probability =
        jittered(base, sigma_, seed_,
                 static_cast<std::uint64_t>(frame.timestamp_ms), 0x90feu);
    if (truth->present) {
      out.keypoints = keypoints_from_skeleton(truth->skeleton);
      out.body_bbox = keypoint_bbox(out.keypoints, frame.width, frame.height);
    }
    return out;
  }

  std::string name() const override { return "scenario-pose"; }

 private:
  const GroundTruthLedger* ledger_;
  double sigma_;
  std::uint64_t seed_;
};

class ScenarioObjectDetector final : public Detector {
 public:
  explicit ScenarioObjectDetector(const DetectorContext& ctx)
      : ledger_(ctx.ledger), sigma_(ctx.noise_sigma), seed_(ctx.noise_seed) {}

  DetectorOutput detect(const RawFrame& frame) override {
    DetectorOutput out;
    const FrameTruth* truth = ledger_->find(frame.timestamp_ms);
    if (truth == nullptr) {
      out.failed = true;
      return out;
    }
    const double base = truth->present ? kScenarioPresentP : kScenarioAbsentP;
    out.person_probability =
        jittered(base, sigma_, seed_,
                 static_cast<std::uint64_t>(frame.timestamp_ms), 0x0b1eu);
    if (truth->present) {
      out.body_bbox = clamp_to_frame(truth->bbox, frame.width, frame.height);
    }
    return out;
  }

  std::string name() const override { return "scenario-object"; }

 private:
  const GroundTruthLedger* ledger_;
  double sigma_;
  std::uint64_t seed_;
};

// Naive pixel detector: a person is a sufficiently large bright blob.
// Luminance (r+g+b)/3 at or above the cutoff marks a pixel; the bbox spans
// the marked pixels and the probability saturates once the blob reaches a
// person-plausible area.
class BlobDetector final : public Detector {
 public:
  static constexpr int kLuminanceCutoff = 110;
  static constexpr double kFullConfidenceArea = 200.0;

  DetectorOutput detect(const RawFrame& frame) override {
    DetectorOutput out;
    if (frame.rgb.empty()) {
      out.failed = true;
      return out;
    }
    std::int64_t count = 0;
    int x0 = frame.width, y0 = frame.height, x1 = -1, y1 = -1;
    const std::uint8_t* p = frame.rgb.data();
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x, p += 3) {
        const int lum = (static_cast<int>(p[0]) + p[1] + p[2]) / 3;
        if (lum >= kLuminanceCutoff) {
          ++count;
          x0 = std::min(x0, x);
          y0 = std::min(y0, y);
          x1 = std::max(x1, x);
          y1 = std::max(y1, y);
        }
      }
    }
    out.person_probability =
        std::min(1.0, static_cast<double>(count) / kFullConfidenceArea);
    if (count > 0) {
      out.body_bbox = PixelRect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    }
    return out;
  }

  std::string name() const override { return "blob"; }
};

struct DetectorRegistry {
  std::mutex mutex;
  std::map<std::string, DetectorFactory> factories;

  DetectorRegistry() {
    factories["scenario-pose"] = [](const DetectorContext& ctx) -> DetectorHandle {
      if (ctx.ledger == nullptr) {
        throw InputError("detector 'scenario-pose' needs a ground-truth ledger");
      }
      return std::make_unique<ScenarioPoseDetector>(ctx);
    };
    factories["scenario-object"] = [](const DetectorContext& ctx) -> DetectorHandle {
      if (ctx.ledger == nullptr) {
        throw InputError("detector 'scenario-object' needs a ground-truth ledger");
      }
      return std::make_unique<ScenarioObjectDetector>(ctx);
    };
    factories["blob"] = [](const DetectorContext&) -> DetectorHandle {
      return std::make_unique<BlobDetector>();
    };
  }
};

DetectorRegistry& detector_registry() {
  static DetectorRegistry registry;
  return registry;
}

}  // namespace

void register_detector(const std::string& name, DetectorFactory factory) {
  auto& reg = detector_registry();
  std::lock_guard lock(reg.mutex);
  reg.factories[name] = std::move(factory);
}

DetectorHandle make_detector(const std::string& name, const DetectorContext& ctx) {
  DetectorFactory factory;
  {
    auto& reg = detector_registry();
    std::lock_guard lock(reg.mutex);
    const auto it = reg.factories.find(name);
    if (it == reg.factories.end()) {
      throw InputError("unknown detector: '" + name + "'");
    }
    factory = it->second;
  }
  return factory(ctx);
}

std::vector<std::string> registered_detectors() {
  auto& reg = detector_registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : reg.factories) names.push_back(name);
  return names;
}

std::pair<DetectorOutput, DetectorOutput> run_detectors(const RawFrame& frame,
                                                        Detector& pose_detector,
                                                        Detector& obj_detector) {
  return {pose_detector.detect(frame), obj_detector.detect(frame)};
}

PresenceRecord make_presence_record(std::int64_t timestamp_ms,
                                    const DetectorOutput& pose,
                                    const DetectorOutput& obj,
                                    int frame_width, int frame_height) {
  PresenceRecord rec;
  rec.timestamp_ms = timestamp_ms;
  rec.p_pose = pose.person_probability;
  rec.p_obj = obj.person_probability;
  rec.present = fuse_presence(rec.p_pose, rec.p_obj);
  if (!rec.present) return rec;

  rec.keypoints = pose.keypoints;
  if (obj.body_bbox) {
    rec.body_bbox = obj.body_bbox;
  } else if (pose.body_bbox) {
    rec.body_bbox = pose.body_bbox;
  } else {
    // Both detectors fused present without localizing (noise-driven): fall
    // back to a frame-centered box so presence always carries a bbox.
    const int w = std::max(1, frame_width / 2);
    const int h = std::max(1, frame_height / 2);
    rec.body_bbox = PixelRect{(frame_width - w) / 2, (frame_height - h) / 2, w, h};
  }
  return rec;
}

}  // namespace ambientis
