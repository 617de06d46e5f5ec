#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ambientis {

// 13-joint planar skeleton: head plus left/right shoulder, elbow, wrist,
// hip, knee, ankle. Joints the detector could not localize are absent.
enum class JointId : int {
  Head = 0,
  LeftShoulder,
  RightShoulder,
  LeftElbow,
  RightElbow,
  LeftWrist,
  RightWrist,
  LeftHip,
  RightHip,
  LeftKnee,
  RightKnee,
  LeftAnkle,
  RightAnkle,
};

inline constexpr int kJointCount = 13;

struct Joint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;  // in [0, 1]
};

// Detector-level keypoint: a joint observation tagged with its id.
struct Keypoint {
  JointId joint = JointId::Head;
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
};

struct Skeleton {
  std::array<std::optional<Joint>, kJointCount> joints;

  [[nodiscard]] const std::optional<Joint>& at(JointId id) const {
    return joints[static_cast<int>(id)];
  }
  void set(JointId id, Joint j) { joints[static_cast<int>(id)] = j; }
};

Skeleton skeleton_from_keypoints(const std::vector<Keypoint>& keypoints);
std::vector<Keypoint> keypoints_from_skeleton(const Skeleton& skel);

enum class PostureClass { Sitting, Standing, Other };

const char* posture_name(PostureClass c);
std::optional<PostureClass> parse_posture(const std::string& name);

struct PostureLabel {
  PostureClass label = PostureClass::Other;
  double confidence = 0.0;
};

// Decision thresholds for the geometric baseline. The knee angle is the
// hip-knee-ankle angle in degrees averaged over complete legs; the torso
// ratio is |shoulder_y - hip_y| / |hip_y - ankle_y|. Both are invariant
// under translation and positive uniform scaling.
struct PostureThresholds {
  double standing_min_knee_deg = 150.0;
  double sitting_max_knee_deg = 120.0;
  double standing_max_torso_ratio = 0.9;
  double sitting_min_torso_ratio = 1.3;
  double min_leg_confidence = 0.3;
};

// Geometric baseline classifier.
//
// Rules, in order: skeletons missing both hips classify as Other with
// confidence 0; mean confidence over the six leg joints (hips, knees,
// ankles, missing = 0) below min_leg_confidence gives Other; otherwise
// knee angle >= standing_min and torso ratio <= standing_max give Standing,
// knee angle <= sitting_max or torso ratio >= sitting_min give Sitting,
// anything else is Other. Total: every skeleton yields exactly one label.
PostureLabel classify_posture(const Skeleton& skel,
                              const PostureThresholds& thresholds = {});

// Pluggable classifier contract. The trained-model classifier from a real
// deployment plugs in here; the geometric baseline ships built in.
class PostureClassifier {
 public:
  virtual ~PostureClassifier() = default;
  virtual PostureLabel classify(const Skeleton& skel) const = 0;
  virtual std::string name() const = 0;
};

using ClassifierHandle = std::shared_ptr<const PostureClassifier>;
using ClassifierFactory = std::function<ClassifierHandle()>;

// Registry keyed by name; "geometric-baseline" is always available.
// load_classifier throws InputError for unknown names.
void register_classifier(const std::string& name, ClassifierFactory factory);
ClassifierHandle load_classifier(const std::string& name);
std::vector<std::string> registered_classifiers();

}  // namespace ambientis
