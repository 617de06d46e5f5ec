#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ambientis/frame.hpp"
#include "ambientis/geometry.hpp"

namespace ambientis {

// Default per-pixel change threshold: 30 per channel, summed over R, G, B.
inline constexpr int kDefaultActiveThreshold = 90;
inline constexpr int kMinActiveThreshold = 1;
inline constexpr int kMaxActiveThreshold = 765;  // 3 * 255

// Summary of the pixels inside the body bbox whose summed RGB change between
// two consecutive frames exceeded the threshold.
struct ActiveRegion {
  std::int64_t active_count = 0;
  std::optional<PixelRect> active_bbox;  // absent iff active_count == 0
  int threshold_used = 0;

  // Region the mask covers (the body bbox clamped to the frame) and the
  // per-pixel active flags over it, row-major. Kept so movement speed can
  // average over active pixels only.
  PixelRect domain;
  std::vector<std::uint8_t> mask;
};

// Per-frame movement features. All three are defined only for frames where
// a person is present; an absent person yields no MotionFeatures at all.
struct MotionFeatures {
  bool inactive = false;
  double movement_scale = 0.0;  // in [0, 1]
  double movement_speed = 0.0;  // pixels/frame, >= 0
};

// Dense displacement field over the body bbox; dx/dy are row-major with the
// same dimensions as the bbox.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> dx;
  std::vector<float> dy;

  [[nodiscard]] bool empty() const { return width <= 0 || height <= 0; }
};

// A pixel inside body_bbox is active iff |dR| + |dG| + |dB| between prev and
// cur strictly exceeds threshold. Throws std::invalid_argument on dimension
// mismatch or a threshold outside [1, 765].
ActiveRegion active_pixels(const RawFrame& prev, const RawFrame& cur,
                           const PixelRect& body_bbox, int threshold);

// Ratio of the active bbox area (intersected with the body bbox) to the body
// bbox area, clamped to [0, 1]; 0 when there are no active pixels. Throws
// std::invalid_argument for a zero-area body bbox.
double movement_scale(const ActiveRegion& active, const PixelRect& body_bbox);

// Mean per-pixel displacement magnitude over the whole field.
// Throws std::invalid_argument on an empty field.
double movement_speed(const FlowField& flow);

// Mean displacement magnitude over active pixels only (speed_domain =
// active). Returns 0 when no pixels are active. The flow field and the
// active mask must cover the same body bbox.
double movement_speed_active(const FlowField& flow, const ActiveRegion& active);

// True iff a person is present and no pixel in the body area moved.
bool inactivity_flag(bool present, const ActiveRegion& active);

}  // namespace ambientis
