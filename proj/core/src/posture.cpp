#include "ambientis/posture.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ambientis/errors.hpp"

namespace ambientis {

Skeleton skeleton_from_keypoints(const std::vector<Keypoint>& keypoints) {
  Skeleton skel;
  for (const Keypoint& kp : keypoints) {
    skel.set(kp.joint, Joint{kp.x, kp.y, kp.confidence});
  }
  return skel;
}

std::vector<Keypoint> keypoints_from_skeleton(const Skeleton& skel) {
  std::vector<Keypoint> out;
  for (int i = 0; i < kJointCount; ++i) {
    if (skel.joints[i]) {
      const Joint& j = *skel.joints[i];
      out.push_back(Keypoint{static_cast<JointId>(i), j.x, j.y, j.confidence});
    }
  }
  return out;
}

const char* posture_name(PostureClass c) {
  switch (c) {
    case PostureClass::Sitting: return "sitting";
    case PostureClass::Standing: return "standing";
    case PostureClass::Other: return "other";
  }
  return "other";
}

std::optional<PostureClass> parse_posture(const std::string& name) {
  if (name == "sitting") return PostureClass::Sitting;
  if (name == "standing") return PostureClass::Standing;
  if (name == "other" || name == "others") return PostureClass::Other;
  return std::nullopt;
}

namespace {

constexpr JointId kLegJoints[] = {JointId::LeftHip,  JointId::RightHip,
                                  JointId::LeftKnee, JointId::RightKnee,
                                  JointId::LeftAnkle, JointId::RightAnkle};

double joint_confidence(const Skeleton& s, JointId id) {
  const auto& j = s.at(id);
  return j ? j->confidence : 0.0;
}

// Angle at the knee between knee->hip and knee->ankle, in degrees.
std::optional<double> knee_angle_deg(const Skeleton& s, JointId hip, JointId knee,
                                     JointId ankle) {
  const auto& h = s.at(hip);
  const auto& k = s.at(knee);
  const auto& a = s.at(ankle);
  if (!h || !k || !a) return std::nullopt;
  const double v1x = h->x - k->x, v1y = h->y - k->y;
  const double v2x = a->x - k->x, v2y = a->y - k->y;
  const double n1 = std::hypot(v1x, v1y);
  const double n2 = std::hypot(v2x, v2y);
  if (n1 == 0.0 || n2 == 0.0) return std::nullopt;
  double c = (v1x * v2x + v1y * v2y) / (n1 * n2);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) * 180.0 / 3.141592653589793238462643383279502884;
}

std::optional<double> mean_y(const Skeleton& s, JointId left, JointId right) {
  const auto& l = s.at(left);
  const auto& r = s.at(right);
  if (l && r) return (l->y + r->y) / 2.0;
  if (l) return l->y;
  if (r) return r->y;
  return std::nullopt;
}

}  // namespace

PostureLabel classify_posture(const Skeleton& skel, const PostureThresholds& th) {
  if (!skel.at(JointId::LeftHip) && !skel.at(JointId::RightHip)) {
    return PostureLabel{PostureClass::Other, 0.0};
  }

  double leg_conf = 0.0;
  for (JointId id : kLegJoints) leg_conf += joint_confidence(skel, id);
  leg_conf /= static_cast<double>(std::size(kLegJoints));
  if (leg_conf < th.min_leg_confidence) {
    return PostureLabel{PostureClass::Other, leg_conf};
  }

  double angle_sum = 0.0;
  int angle_n = 0;
  if (auto a = knee_angle_deg(skel, JointId::LeftHip, JointId::LeftKnee,
                              JointId::LeftAnkle)) {
    angle_sum += *a;
    ++angle_n;
  }
  if (auto a = knee_angle_deg(skel, JointId::RightHip, JointId::RightKnee,
                              JointId::RightAnkle)) {
    angle_sum += *a;
    ++angle_n;
  }

  const auto shoulder_y = mean_y(skel, JointId::LeftShoulder, JointId::RightShoulder);
  const auto hip_y = mean_y(skel, JointId::LeftHip, JointId::RightHip);
  const auto ankle_y = mean_y(skel, JointId::LeftAnkle, JointId::RightAnkle);

  if (angle_n == 0 || !shoulder_y || !hip_y || !ankle_y) {
    return PostureLabel{PostureClass::Other, leg_conf};
  }
  const double leg_span = std::abs(*hip_y - *ankle_y);
  if (leg_span == 0.0) {
    return PostureLabel{PostureClass::Other, leg_conf};
  }

  const double knee_deg = angle_sum / angle_n;
  const double torso_ratio = std::abs(*shoulder_y - *hip_y) / leg_span;

  PostureClass label = PostureClass::Other;
  if (knee_deg >= th.standing_min_knee_deg && torso_ratio <= th.standing_max_torso_ratio) {
    label = PostureClass::Standing;
  } else if (knee_deg <= th.sitting_max_knee_deg ||
             torso_ratio >= th.sitting_min_torso_ratio) {
    label = PostureClass::Sitting;
  }
  return PostureLabel{label, leg_conf};
}

namespace {

class GeometricBaseline final : public PostureClassifier {
 public:
  PostureLabel classify(const Skeleton& skel) const override {
    return classify_posture(skel);
  }
  std::string name() const override { return "geometric-baseline"; }
};

struct ClassifierRegistry {
  std::mutex mutex;
  std::map<std::string, ClassifierFactory> factories;

  ClassifierRegistry() {
    factories["geometric-baseline"] = [] {
      return std::make_shared<const GeometricBaseline>();
    };
  }
};

ClassifierRegistry& classifier_registry() {
  static ClassifierRegistry registry;
  return registry;
}

}  // namespace

void register_classifier(const std::string& name, ClassifierFactory factory) {
  auto& reg = classifier_registry();
  std::lock_guard lock(reg.mutex);
  reg.factories[name] = std::move(factory);
}

ClassifierHandle load_classifier(const std::string& name) {
  auto& reg = classifier_registry();
  std::lock_guard lock(reg.mutex);
  const auto it = reg.factories.find(name);
  if (it == reg.factories.end()) {
    throw InputError("unknown posture classifier: '" + name + "'");
  }
  return it->second();
}

std::vector<std::string> registered_classifiers() {
  auto& reg = classifier_registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : reg.factories) names.push_back(name);
  return names;
}

}  // namespace ambientis
