#pragma once

#include <cstdint>
#include <vector>

#include "ambientis/posture.hpp"

namespace ambientis {

// Deterministic synthetic skeletons built from target geometry. Knee angle
// and torso ratio are exact by construction (the knee is placed at the
// horizontal offset (D/2) * cot(theta/2) from the hip-ankle column), so a
// skeleton built for a given (knee_deg, torso_ratio) measures back exactly
// those values.
//
// hip_center is the midpoint between the hips, leg_drop the vertical
// hip-to-ankle distance in pixels (y grows downward).
Skeleton make_geometric_skeleton(double knee_deg, double torso_ratio,
                                 double hip_center_x, double hip_center_y,
                                 double leg_drop, double joint_confidence);

// The canonical corpus: 200 sitting, 200 standing, 100 degenerate skeletons,
// derived deterministically from the seed. Canonical sets sample geometry
// comfortably inside the baseline's decision regions; degenerate skeletons
// exercise the Other fallbacks (low leg confidence, missing hips, ambiguous
// geometry).
struct SkeletonCorpus {
  std::vector<Skeleton> sitting;
  std::vector<Skeleton> standing;
  std::vector<Skeleton> degenerate;
};

SkeletonCorpus make_synthetic_corpus(std::uint64_t seed);

}  // namespace ambientis
