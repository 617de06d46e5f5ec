#include "ambientis/motion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ambientis {

ActiveRegion active_pixels(const RawFrame& prev, const RawFrame& cur,
                           const PixelRect& body_bbox, int threshold) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw std::invalid_argument("active_pixels: frame dimensions differ");
  }
  if (threshold < kMinActiveThreshold || threshold > kMaxActiveThreshold) {
    throw std::invalid_argument("active_pixels: threshold outside [1, 765]");
  }

  ActiveRegion region;
  region.threshold_used = threshold;
  region.domain = clamp_to_frame(body_bbox, cur.width, cur.height);
  if (region.domain.empty()) return region;

  region.mask.assign(static_cast<std::size_t>(region.domain.area()), 0);
  int x0 = region.domain.right(), y0 = region.domain.bottom();
  int x1 = region.domain.x - 1, y1 = region.domain.y - 1;

  for (int y = region.domain.y; y < region.domain.bottom(); ++y) {
    const std::uint8_t* pp = prev.rgb.data() +
        (static_cast<std::size_t>(y) * prev.width + region.domain.x) * 3;
    const std::uint8_t* cp = cur.rgb.data() +
        (static_cast<std::size_t>(y) * cur.width + region.domain.x) * 3;
    std::uint8_t* mrow = region.mask.data() +
        static_cast<std::size_t>(y - region.domain.y) * region.domain.w;
    for (int x = region.domain.x; x < region.domain.right(); ++x, pp += 3, cp += 3) {
      const int diff = std::abs(static_cast<int>(cp[0]) - pp[0]) +
                       std::abs(static_cast<int>(cp[1]) - pp[1]) +
                       std::abs(static_cast<int>(cp[2]) - pp[2]);
      if (diff > threshold) {
        mrow[x - region.domain.x] = 1;
        ++region.active_count;
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
  }
  if (region.active_count > 0) {
    region.active_bbox = PixelRect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  }
  return region;
}

double movement_scale(const ActiveRegion& active, const PixelRect& body_bbox) {
  if (body_bbox.area() <= 0) {
    throw std::invalid_argument("movement_scale: body bbox has no area");
  }
  if (!active.active_bbox) return 0.0;
  const PixelRect overlap = intersect(*active.active_bbox, body_bbox);
  const double ratio =
      static_cast<double>(overlap.area()) / static_cast<double>(body_bbox.area());
  return std::clamp(ratio, 0.0, 1.0);
}

double movement_speed(const FlowField& flow) {
  if (flow.empty()) {
    throw std::invalid_argument("movement_speed: empty flow field");
  }
  double sum = 0.0;
  const std::size_t n = flow.dx.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum += std::hypot(static_cast<double>(flow.dx[i]),
                      static_cast<double>(flow.dy[i]));
  }
  return sum / static_cast<double>(n);
}

double movement_speed_active(const FlowField& flow, const ActiveRegion& active) {
  if (flow.empty()) {
    throw std::invalid_argument("movement_speed_active: empty flow field");
  }
  if (flow.width != active.domain.w || flow.height != active.domain.h) {
    throw std::invalid_argument(
        "movement_speed_active: flow field and active mask cover different areas");
  }
  if (active.active_count == 0) return 0.0;
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t i = 0; i < active.mask.size(); ++i) {
    if (active.mask[i]) {
      sum += std::hypot(static_cast<double>(flow.dx[i]),
                        static_cast<double>(flow.dy[i]));
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

bool inactivity_flag(bool present, const ActiveRegion& active) {
  return present && active.active_count == 0;
}

}  // namespace ambientis
