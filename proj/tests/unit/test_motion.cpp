#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "ambientis/motion.hpp"
#include "ambientis/rng.hpp"

using namespace ambientis;

namespace {

RawFrame flat_frame(int w, int h, std::uint8_t lum) {
  RawFrame f;
  f.width = std::uint16_t(w);
  f.height = std::uint16_t(h);
  f.rgb.assign(std::size_t(w) * h * 3, lum);
  return f;
}

void set_px(RawFrame& f, int x, int y, int r, int g, int b) {
  std::uint8_t* p = f.px(x, y);
  p[0] = std::uint8_t(r);
  p[1] = std::uint8_t(g);
  p[2] = std::uint8_t(b);
}

}  // namespace

TEST_CASE("per-pixel change must strictly exceed the threshold") {
  RawFrame prev = flat_frame(6, 4, 10);
  RawFrame cur = flat_frame(6, 4, 10);
  const PixelRect full{0, 0, 6, 4};

  // channel sum differs by exactly 90: not active
  set_px(cur, 2, 1, 40, 40, 40);
  ActiveRegion r = active_pixels(prev, cur, full, 90);
  CHECK(r.active_count == 0);
  CHECK_FALSE(r.active_bbox.has_value());

  // one more unit tips it over
  set_px(cur, 2, 1, 40, 40, 41);
  r = active_pixels(prev, cur, full, 90);
  CHECK(r.active_count == 1);
  REQUIRE(r.active_bbox.has_value());
  CHECK(*r.active_bbox == PixelRect{2, 1, 1, 1});
}

TEST_CASE("active bbox spans the changed pixels only") {
  RawFrame prev = flat_frame(8, 8, 0);
  RawFrame cur = flat_frame(8, 8, 0);
  set_px(cur, 1, 2, 255, 255, 255);
  set_px(cur, 5, 6, 255, 255, 255);
  const ActiveRegion r = active_pixels(prev, cur, PixelRect{0, 0, 8, 8}, 90);
  CHECK(r.active_count == 2);
  CHECK(*r.active_bbox == PixelRect{1, 2, 5, 5});
}

TEST_CASE("domain restricts the search") {
  RawFrame prev = flat_frame(8, 8, 0);
  RawFrame cur = flat_frame(8, 8, 0);
  set_px(cur, 0, 0, 255, 255, 255);  // outside the domain below
  set_px(cur, 4, 4, 255, 255, 255);
  const ActiveRegion r = active_pixels(prev, cur, PixelRect{3, 3, 3, 3}, 90);
  CHECK(r.active_count == 1);
  CHECK(*r.active_bbox == PixelRect{4, 4, 1, 1});
  CHECK(r.domain == PixelRect{3, 3, 3, 3});
}

TEST_CASE("bbox reaching outside the frame is clamped") {
  RawFrame prev = flat_frame(8, 8, 0);
  RawFrame cur = flat_frame(8, 8, 0);
  set_px(cur, 7, 7, 255, 255, 255);
  const ActiveRegion r = active_pixels(prev, cur, PixelRect{5, 5, 50, 50}, 90);
  CHECK(r.active_count == 1);
  CHECK(r.domain == PixelRect{5, 5, 3, 3});
}

TEST_CASE("invalid motion inputs throw") {
  RawFrame a = flat_frame(6, 4, 0);
  RawFrame b = flat_frame(5, 4, 0);
  CHECK_THROWS_AS((void)active_pixels(a, b, PixelRect{0, 0, 4, 4}, 90),
                  std::invalid_argument);
  RawFrame c = flat_frame(6, 4, 0);
  CHECK_THROWS_AS((void)active_pixels(a, c, PixelRect{0, 0, 4, 4}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)active_pixels(a, c, PixelRect{0, 0, 4, 4}, 766),
                  std::invalid_argument);
}

TEST_CASE("movement scale is intersection area over body area") {
  ActiveRegion r;
  r.active_count = 12;
  r.active_bbox = PixelRect{2, 2, 4, 3};
  const PixelRect body{0, 0, 8, 6};
  CHECK(movement_scale(r, body) == doctest::Approx(12.0 / 48.0));

  // no activity: zero scale
  ActiveRegion quiet;
  CHECK(movement_scale(quiet, body) == 0.0);

  // active bbox poking outside the body counts only the overlap
  ActiveRegion wide;
  wide.active_count = 1;
  wide.active_bbox = PixelRect{6, 4, 10, 10};
  CHECK(movement_scale(wide, body) == doctest::Approx(4.0 / 48.0));

  CHECK_THROWS_AS((void)movement_scale(r, PixelRect{0, 0, 0, 5}),
                  std::invalid_argument);
}

TEST_CASE("movement speed is the mean flow magnitude") {
  FlowField flow;
  flow.width = 2;
  flow.height = 1;
  flow.dx = {3.0f, 0.0f};
  flow.dy = {4.0f, 0.0f};
  CHECK(movement_speed(flow) == doctest::Approx(2.5));  // (5 + 0) / 2

  FlowField empty;
  CHECK_THROWS_AS((void)movement_speed(empty), std::invalid_argument);
}

TEST_CASE("active-masked speed averages only active pixels") {
  RawFrame prev = flat_frame(4, 1, 0);
  RawFrame cur = flat_frame(4, 1, 0);
  set_px(cur, 1, 0, 255, 255, 255);
  const ActiveRegion r = active_pixels(prev, cur, PixelRect{0, 0, 4, 1}, 90);
  REQUIRE(r.active_count == 1);

  FlowField flow;
  flow.width = 4;
  flow.height = 1;
  flow.dx = {9.0f, 2.0f, 9.0f, 9.0f};
  flow.dy = {0.0f, 0.0f, 0.0f, 0.0f};
  CHECK(movement_speed_active(flow, r) == doctest::Approx(2.0));

  ActiveRegion quiet;
  quiet.domain = PixelRect{0, 0, 4, 1};
  quiet.mask.assign(4, 0);
  CHECK(movement_speed_active(flow, quiet) == 0.0);
}

TEST_CASE("inactivity needs presence and stillness") {
  ActiveRegion quiet;
  ActiveRegion busy;
  busy.active_count = 3;
  CHECK(inactivity_flag(true, quiet));
  CHECK_FALSE(inactivity_flag(true, busy));
  CHECK_FALSE(inactivity_flag(false, quiet));
}

TEST_CASE("active_pixels agrees with the naive oracle on random frames") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = int(rng.next_int(4, 40));
    const int h = int(rng.next_int(4, 30));
    RawFrame prev = oracles::random_frame(rng, w, h);
    RawFrame cur = oracles::random_frame(rng, w, h);
    PixelRect bbox{int(rng.next_int(-4, w - 1)), int(rng.next_int(-4, h - 1)),
                   int(rng.next_int(1, w + 8)), int(rng.next_int(1, h + 8))};
    const int threshold = int(rng.next_int(1, 765));
    const PixelRect domain = clamp_to_frame(bbox, w, h);
    if (domain.empty()) continue;

    const ActiveRegion got = active_pixels(prev, cur, bbox, threshold);
    const oracles::NaiveActive want =
        oracles::naive_active_pixels(prev, cur, domain, threshold);
    CHECK(got.active_count == want.count);
    CHECK(got.active_bbox == want.bbox);
  }
}
