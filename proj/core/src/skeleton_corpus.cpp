#include "ambientis/skeleton_corpus.hpp"

#include <cmath>

#include "ambientis/rng.hpp"

namespace ambientis {

Skeleton make_geometric_skeleton(double knee_deg, double torso_ratio,
                                 double hip_center_x, double hip_center_y,
                                 double leg_drop, double joint_confidence) {
  const double pi = 3.141592653589793238462643383279502884;
  const double half = knee_deg * pi / 180.0 / 2.0;
  // Horizontal knee offset that makes the hip-knee-ankle angle exactly
  // knee_deg when the ankle sits leg_drop below the hip.
  const double knee_offset =
      std::tan(half) == 0.0 ? 0.0 : (leg_drop / 2.0) / std::tan(half);

  const double hip_half = 0.14 * leg_drop;
  const double shoulder_half = 0.18 * leg_drop;
  const double torso = torso_ratio * leg_drop;
  const double c = joint_confidence;

  Skeleton s;
  s.set(JointId::LeftHip, {hip_center_x - hip_half, hip_center_y, c});
  s.set(JointId::RightHip, {hip_center_x + hip_half, hip_center_y, c});
  s.set(JointId::LeftKnee,
        {hip_center_x - hip_half + knee_offset, hip_center_y + leg_drop / 2.0, c});
  s.set(JointId::RightKnee,
        {hip_center_x + hip_half + knee_offset, hip_center_y + leg_drop / 2.0, c});
  s.set(JointId::LeftAnkle, {hip_center_x - hip_half, hip_center_y + leg_drop, c});
  s.set(JointId::RightAnkle, {hip_center_x + hip_half, hip_center_y + leg_drop, c});
  s.set(JointId::LeftShoulder,
        {hip_center_x - shoulder_half, hip_center_y - torso, c});
  s.set(JointId::RightShoulder,
        {hip_center_x + shoulder_half, hip_center_y - torso, c});
  s.set(JointId::Head, {hip_center_x, hip_center_y - torso - 0.28 * leg_drop, c});
  s.set(JointId::LeftElbow,
        {hip_center_x - 1.3 * shoulder_half, hip_center_y - 0.55 * torso, c});
  s.set(JointId::RightElbow,
        {hip_center_x + 1.3 * shoulder_half, hip_center_y - 0.55 * torso, c});
  s.set(JointId::LeftWrist,
        {hip_center_x - 1.45 * shoulder_half, hip_center_y - 0.12 * torso, c});
  s.set(JointId::RightWrist,
        {hip_center_x + 1.45 * shoulder_half, hip_center_y - 0.12 * torso, c});
  return s;
}

SkeletonCorpus make_synthetic_corpus(std::uint64_t seed) {
  SkeletonCorpus corpus;
  Rng rng(hash_mix(seed, 0x5c0f9u));

  const auto place = [&](double knee_deg, double torso_ratio, double conf) {
    const double hx = rng.next_real(12.0, 110.0);
    const double hy = rng.next_real(15.0, 70.0);
    const double drop = rng.next_real(9.0, 55.0);
    return make_geometric_skeleton(knee_deg, torso_ratio, hx, hy, drop, conf);
  };

  for (int i = 0; i < 200; ++i) {
    const double knee = rng.next_real(62.0, 114.0);
    const double ratio = rng.next_real(1.36, 1.85);
    corpus.sitting.push_back(place(knee, ratio, rng.next_real(0.55, 1.0)));
  }
  for (int i = 0; i < 200; ++i) {
    const double knee = rng.next_real(156.0, 179.5);
    const double ratio = rng.next_real(0.45, 0.84);
    corpus.standing.push_back(place(knee, ratio, rng.next_real(0.55, 1.0)));
  }
  for (int i = 0; i < 100; ++i) {
    switch (i % 3) {
      case 0: {
        // Both hips missing.
        Skeleton s = place(rng.next_real(150.0, 179.0), rng.next_real(0.5, 0.8),
                           rng.next_real(0.55, 1.0));
        s.joints[static_cast<int>(JointId::LeftHip)].reset();
        s.joints[static_cast<int>(JointId::RightHip)].reset();
        corpus.degenerate.push_back(s);
        break;
      }
      case 1:
        // Leg confidence below the gate.
        corpus.degenerate.push_back(place(rng.next_real(60.0, 179.0),
                                          rng.next_real(0.5, 1.7),
                                          rng.next_real(0.0, 0.25)));
        break;
      default:
        // Geometry between the decision regions.
        corpus.degenerate.push_back(place(rng.next_real(124.0, 146.0),
                                          rng.next_real(0.94, 1.26),
                                          rng.next_real(0.55, 1.0)));
        break;
    }
  }
  return corpus;
}

}  // namespace ambientis
