#include "ambientis/optical_flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ambientis {

namespace {

struct GrayImage {
  int w = 0;
  int h = 0;
  std::vector<float> px;

  float at(int x, int y) const {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return px[static_cast<std::size_t>(y) * w + x];
  }

  // Bilinear sample with border clamping; exact at integer coordinates.
  float sample(float fx, float fy) const {
    fx = std::clamp(fx, 0.0f, static_cast<float>(w - 1));
    fy = std::clamp(fy, 0.0f, static_cast<float>(h - 1));
    const int x0 = static_cast<int>(fx);
    const int y0 = static_cast<int>(fy);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const float ax = fx - static_cast<float>(x0);
    const float ay = fy - static_cast<float>(y0);
    const float top = at(x0, y0) * (1.0f - ax) + at(x1, y0) * ax;
    const float bot = at(x0, y1) * (1.0f - ax) + at(x1, y1) * ax;
    return top * (1.0f - ay) + bot * ay;
  }
};

GrayImage extract_gray(const RawFrame& frame, const PixelRect& region) {
  GrayImage img;
  img.w = region.w;
  img.h = region.h;
  img.px.resize(static_cast<std::size_t>(region.w) * region.h);
  for (int y = 0; y < region.h; ++y) {
    const std::uint8_t* row = frame.rgb.data() +
        (static_cast<std::size_t>(region.y + y) * frame.width + region.x) * 3;
    float* out = img.px.data() + static_cast<std::size_t>(y) * region.w;
    for (int x = 0; x < region.w; ++x) {
      const std::uint8_t* p = row + static_cast<std::size_t>(x) * 3;
      out[x] = (static_cast<float>(p[0]) + p[1] + p[2]) / 3.0f;
    }
  }
  return img;
}

GrayImage downsample(const GrayImage& src) {
  GrayImage dst;
  dst.w = src.w / 2;
  dst.h = src.h / 2;
  dst.px.resize(static_cast<std::size_t>(dst.w) * dst.h);
  for (int y = 0; y < dst.h; ++y) {
    for (int x = 0; x < dst.w; ++x) {
      const float sum = src.at(2 * x, 2 * y) + src.at(2 * x + 1, 2 * y) +
                        src.at(2 * x, 2 * y + 1) + src.at(2 * x + 1, 2 * y + 1);
      dst.px[static_cast<std::size_t>(y) * dst.w + x] = sum / 4.0f;
    }
  }
  return dst;
}

struct FloatField {
  int w = 0;
  int h = 0;
  std::vector<float> u;
  std::vector<float> v;

  void resize(int width, int height) {
    w = width;
    h = height;
    u.assign(static_cast<std::size_t>(w) * h, 0.0f);
    v.assign(static_cast<std::size_t>(w) * h, 0.0f);
  }
};

// Doubles the field dimensions to (w, h), scaling displacement values by the
// actual per-axis ratio (floor halving makes the ratio slightly off 2).
FloatField upsample(const FloatField& src, int w, int h) {
  FloatField dst;
  dst.resize(w, h);
  const float sx = static_cast<float>(src.w) / static_cast<float>(w);
  const float sy = static_cast<float>(src.h) / static_cast<float>(h);
  const float gain_x = static_cast<float>(w) / static_cast<float>(src.w);
  const float gain_y = static_cast<float>(h) / static_cast<float>(src.h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float fx = std::min((static_cast<float>(x) + 0.5f) * sx - 0.5f,
                                static_cast<float>(src.w - 1));
      const float fy = std::min((static_cast<float>(y) + 0.5f) * sy - 0.5f,
                                static_cast<float>(src.h - 1));
      const int x0 = std::max(0, static_cast<int>(std::floor(fx)));
      const int y0 = std::max(0, static_cast<int>(std::floor(fy)));
      const int x1 = std::min(x0 + 1, src.w - 1);
      const int y1 = std::min(y0 + 1, src.h - 1);
      const float ax = std::clamp(fx - static_cast<float>(x0), 0.0f, 1.0f);
      const float ay = std::clamp(fy - static_cast<float>(y0), 0.0f, 1.0f);
      const auto lerp2 = [&](const std::vector<float>& f) {
        const float top = f[static_cast<std::size_t>(y0) * src.w + x0] * (1 - ax) +
                          f[static_cast<std::size_t>(y0) * src.w + x1] * ax;
        const float bot = f[static_cast<std::size_t>(y1) * src.w + x0] * (1 - ax) +
                          f[static_cast<std::size_t>(y1) * src.w + x1] * ax;
        return top * (1 - ay) + bot * ay;
      };
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      dst.u[i] = lerp2(src.u) * gain_x;
      dst.v[i] = lerp2(src.v) * gain_y;
    }
  }
  return dst;
}

void box_smooth(FloatField& field, int passes) {
  if (passes <= 0 || field.w < 2 || field.h < 2) return;
  std::vector<float> tmp(field.u.size());
  for (int pass = 0; pass < passes; ++pass) {
    for (std::vector<float>* chan : {&field.u, &field.v}) {
      for (int y = 0; y < field.h; ++y) {
        for (int x = 0; x < field.w; ++x) {
          float sum = 0.0f;
          for (int dy = -1; dy <= 1; ++dy) {
            const int yy = std::clamp(y + dy, 0, field.h - 1);
            for (int dx = -1; dx <= 1; ++dx) {
              const int xx = std::clamp(x + dx, 0, field.w - 1);
              sum += (*chan)[static_cast<std::size_t>(yy) * field.w + xx];
            }
          }
          tmp[static_cast<std::size_t>(y) * field.w + x] = sum / 9.0f;
        }
      }
      chan->swap(tmp);
    }
  }
}

// One Lucas-Kanade refinement sweep at a fixed pyramid level. Spatial
// gradients come from prev (constant across iterations); the temporal
// difference warps cur by the current field estimate.
void refine_level(const GrayImage& prev, const GrayImage& cur, FloatField& field,
                  const FlowParams& params) {
  const int w = prev.w;
  const int h = prev.h;
  std::vector<float> ix(static_cast<std::size_t>(w) * h);
  std::vector<float> iy(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      ix[i] = (prev.at(x + 1, y) - prev.at(x - 1, y)) * 0.5f;
      iy[i] = (prev.at(x, y + 1) - prev.at(x, y - 1)) * 0.5f;
    }
  }

  const int r = params.window_radius;
  const float lambda = 1.0f;  // keeps the 2x2 solve stable in flat windows
  const float step_cap = static_cast<float>(std::max(1, r));
  std::vector<float> it(static_cast<std::size_t>(w) * h);

  for (int iter = 0; iter < params.iterations; ++iter) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        it[i] = cur.sample(static_cast<float>(x) + field.u[i],
                           static_cast<float>(y) + field.v[i]) -
                prev.px[i];
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        float sxx = 0.0f, sxy = 0.0f, syy = 0.0f, sxt = 0.0f, syt = 0.0f;
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = std::clamp(y + dy, 0, h - 1);
          for (int dx = -r; dx <= r; ++dx) {
            const int xx = std::clamp(x + dx, 0, w - 1);
            const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
            sxx += ix[j] * ix[j];
            sxy += ix[j] * iy[j];
            syy += iy[j] * iy[j];
            sxt += ix[j] * it[j];
            syt += iy[j] * it[j];
          }
        }
        const float a11 = sxx + lambda;
        const float a22 = syy + lambda;
        const float det = a11 * a22 - sxy * sxy;
        if (det <= 0.0f) continue;
        float du = (-sxt * a22 + syt * sxy) / det;
        float dv = (-syt * a11 + sxt * sxy) / det;
        du = std::clamp(du, -step_cap, step_cap);
        dv = std::clamp(dv, -step_cap, step_cap);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        field.u[i] += du;
        field.v[i] += dv;
      }
    }
    box_smooth(field, params.smooth_passes);
  }
}

}  // namespace

FlowField dense_flow(const RawFrame& prev, const RawFrame& cur,
                     const PixelRect& body_bbox, const FlowParams& params) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw std::invalid_argument("dense_flow: frame dimensions differ");
  }
  if (body_bbox.empty() ||
      clamp_to_frame(body_bbox, cur.width, cur.height) != body_bbox) {
    throw std::invalid_argument("dense_flow: body bbox outside the frame");
  }

  const PixelRect region = clamp_to_frame(
      PixelRect{body_bbox.x - params.bbox_padding, body_bbox.y - params.bbox_padding,
                body_bbox.w + 2 * params.bbox_padding,
                body_bbox.h + 2 * params.bbox_padding},
      cur.width, cur.height);

  std::vector<GrayImage> prev_pyr{extract_gray(prev, region)};
  std::vector<GrayImage> cur_pyr{extract_gray(cur, region)};
  while (static_cast<int>(prev_pyr.size()) < params.max_levels &&
         prev_pyr.back().w / 2 >= params.min_level_size &&
         prev_pyr.back().h / 2 >= params.min_level_size) {
    prev_pyr.push_back(downsample(prev_pyr.back()));
    cur_pyr.push_back(downsample(cur_pyr.back()));
  }

  FloatField field;
  field.resize(prev_pyr.back().w, prev_pyr.back().h);
  for (int level = static_cast<int>(prev_pyr.size()) - 1; level >= 0; --level) {
    if (field.w != prev_pyr[level].w || field.h != prev_pyr[level].h) {
      field = upsample(field, prev_pyr[level].w, prev_pyr[level].h);
    }
    refine_level(prev_pyr[level], cur_pyr[level], field, params);
  }

  FlowField out;
  out.width = body_bbox.w;
  out.height = body_bbox.h;
  out.dx.resize(static_cast<std::size_t>(out.width) * out.height);
  out.dy.resize(out.dx.size());
  const int off_x = body_bbox.x - region.x;
  const int off_y = body_bbox.y - region.y;
  for (int y = 0; y < out.height; ++y) {
    const std::size_t src_row = static_cast<std::size_t>(y + off_y) * region.w + off_x;
    const std::size_t dst_row = static_cast<std::size_t>(y) * out.width;
    for (int x = 0; x < out.width; ++x) {
      out.dx[dst_row + x] = field.u[src_row + x];
      out.dy[dst_row + x] = field.v[src_row + x];
    }
  }
  return out;
}

}  // namespace ambientis
