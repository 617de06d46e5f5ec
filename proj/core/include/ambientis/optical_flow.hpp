#pragma once

#include "ambientis/frame.hpp"
#include "ambientis/geometry.hpp"
#include "ambientis/motion.hpp"

namespace ambientis {

// Coarse-to-fine dense flow: an image pyramid with iterative windowed
// gradient (Lucas-Kanade style) refinement at each level, followed by a
// light smoothing of the field. Deterministic for fixed inputs.
struct FlowParams {
  int bbox_padding = 8;    // pixels added around the body bbox, clamped to frame
  int max_levels = 4;      // pyramid depth cap
  int min_level_size = 12; // stop building levels below this dimension
  int iterations = 8;      // refinement iterations per level
  int window_radius = 2;   // (2r+1)^2 gradient window
  int smooth_passes = 1;   // 3x3 field blurs per iteration
};

// Per-pixel displacement from prev to cur over body_bbox. The field returned
// has exactly the bbox dimensions; computation runs on the padded region and
// the padding is cropped away. Throws std::invalid_argument if the frames
// disagree in size or the bbox falls outside the frame.
FlowField dense_flow(const RawFrame& prev, const RawFrame& cur,
                     const PixelRect& body_bbox, const FlowParams& params = {});

}  // namespace ambientis
