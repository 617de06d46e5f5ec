#include "ambientis/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "ambientis/errors.hpp"
#include "ambientis/motion.hpp"
#include "ambientis/simulator.hpp"

namespace ambientis {

const char* speed_domain_name(SpeedDomain d) {
  return d == SpeedDomain::Bbox ? "bbox" : "active";
}

std::optional<SpeedDomain> parse_speed_domain(const std::string& name) {
  if (name == "bbox") return SpeedDomain::Bbox;
  if (name == "active") return SpeedDomain::Active;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t to_i64(const std::string& value, const std::string& key,
                    std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad integer for '" +
                      key + "'");
  }
}

double to_f64(const std::string& value, const std::string& key,
              std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number for '" +
                      key + "'");
  }
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open pipeline config: " + path);

  PipelineConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "pose_detector") cfg.pose_detector = value;
    else if (key == "object_detector") cfg.object_detector = value;
    else if (key == "classifier") cfg.classifier = value;
    else if (key == "active_threshold") cfg.active_threshold = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "speed_domain") {
      const auto domain = parse_speed_domain(value);
      if (!domain) {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": unknown speed_domain '" + value + "'");
      }
      cfg.speed_domain = *domain;
    } else if (key == "timezone_offset_min") cfg.tz_offset_min = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "detector_noise_sigma") cfg.detector_noise_sigma = to_f64(value, key, line_no);
    else if (key == "detector_noise_seed") cfg.detector_noise_seed = static_cast<std::uint64_t>(to_i64(value, key, line_no));
    else if (key == "ledger_path") cfg.ledger_path = value;
    else if (key == "flow_bbox_padding") cfg.flow.bbox_padding = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "flow_max_levels") cfg.flow.max_levels = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "flow_min_level_size") cfg.flow.min_level_size = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "flow_iterations") cfg.flow.iterations = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "flow_window_radius") cfg.flow.window_radius = static_cast<int>(to_i64(value, key, line_no));
    else if (key == "flow_smooth_passes") cfg.flow.smooth_passes = static_cast<int>(to_i64(value, key, line_no));
    else {
      throw FormatError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  return cfg;
}

FeatureExtractor::FeatureExtractor(const PipelineConfig& config,
                                   const GroundTruthLedger* ledger)
    : config_(config) {
  if (config_.active_threshold < kMinActiveThreshold ||
      config_.active_threshold > kMaxActiveThreshold) {
    throw InputError("active_threshold must be within [1, 765]");
  }
  const DetectorContext ctx{ledger, config_.detector_noise_sigma,
                            config_.detector_noise_seed};
  pose_ = make_detector(config_.pose_detector, ctx);
  obj_ = make_detector(config_.object_detector, ctx);
  classifier_ = load_classifier(config_.classifier);
}

FeatureExtractor::~FeatureExtractor() {
  if (prev_) release_frame(*prev_);
}

FrameFeatures FeatureExtractor::process(RawFrame&& frame) {
  if (frames_seen_ > 0 && frame.timestamp_ms <= last_ts_) {
    release_frame(frame);
    throw FormatError("frame timestamps must be strictly increasing (" +
                      std::to_string(frame.timestamp_ms) + " after " +
                      std::to_string(last_ts_) + ")");
  }

  const auto [pose_out, obj_out] = run_detectors(frame, *pose_, *obj_);
  const PresenceRecord rec = make_presence_record(
      frame.timestamp_ms, pose_out, obj_out, frame.width, frame.height);

  FrameFeatures features;
  features.timestamp_ms = frame.timestamp_ms;
  features.present = rec.present;

  if (rec.present && !rec.keypoints.empty()) {
    features.posture = classifier_->classify(skeleton_from_keypoints(rec.keypoints));
  }

  if (rec.present && prev_ && rec.body_bbox) {
    const PixelRect bbox =
        clamp_to_frame(*rec.body_bbox, frame.width, frame.height);
    if (!bbox.empty()) {
      const ActiveRegion active =
          active_pixels(*prev_, frame, bbox, config_.active_threshold);
      const FlowField flow = dense_flow(*prev_, frame, bbox, config_.flow);
      MotionFeatures motion;
      motion.inactive = inactivity_flag(true, active);
      motion.movement_scale = movement_scale(active, bbox);
      motion.movement_speed = config_.speed_domain == SpeedDomain::Active
                                  ? movement_speed_active(flow, active)
                                  : movement_speed(flow);
      features.motion = motion;
    }
  }

  if (prev_) release_frame(*prev_);
  prev_ = std::move(frame);
  last_ts_ = features.timestamp_ms;
  ++frames_seen_;
  return features;
}

std::vector<FrameFeatures> run_pipeline(FrameStream& stream,
                                        const PipelineConfig& config,
                                        const GroundTruthLedger* ledger) {
  GroundTruthLedger loaded;
  if (ledger == nullptr && !config.ledger_path.empty()) {
    loaded = read_ledger_json(config.ledger_path);
    ledger = &loaded;
  }

  FeatureExtractor extractor(config, ledger);
  std::vector<FrameFeatures> features;
  while (auto frame = stream.next()) {
    features.push_back(extractor.process(std::move(*frame)));
  }
  return features;
}

}  // namespace ambientis
