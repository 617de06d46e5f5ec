#include <benchmark/benchmark.h>

#include "ambientis/motion.hpp"
#include "ambientis/optical_flow.hpp"
#include "ambientis/rng.hpp"

namespace {

using namespace ambientis;

// Smooth blocky texture rather than white noise: flow convergence cost
// depends on having gradients at several scales, like a rendered occupant.
RawFrame blocky_frame(std::uint64_t seed, int width, int height, int shift_x) {
  RawFrame frame;
  frame.width = static_cast<std::uint16_t>(width);
  frame.height = static_cast<std::uint16_t>(height);
  frame.rgb.resize(std::size_t(width) * std::size_t(height) * 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint64_t cell = hash_mix(seed, std::uint64_t((x - shift_x) / 4),
                                          std::uint64_t(y / 4));
      const auto v = static_cast<std::uint8_t>(40 + cell % 176);
      std::uint8_t* px = frame.px(x, y);
      px[0] = px[1] = px[2] = v;
    }
  }
  return frame;
}

void BM_DenseFlow(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const int h = static_cast<int>(state.range(1));
  const RawFrame prev = blocky_frame(3, w, h, 0);
  const RawFrame cur = blocky_frame(3, w, h, 2);
  const PixelRect bbox{w / 4, h / 4, w / 2, h / 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dense_flow(prev, cur, bbox));
  }
}
BENCHMARK(BM_DenseFlow)->Args({64, 48})->Args({128, 96});

void BM_MovementSpeed(benchmark::State& state) {
  const RawFrame prev = blocky_frame(4, 64, 48, 0);
  const RawFrame cur = blocky_frame(4, 64, 48, 2);
  const PixelRect bbox{16, 12, 32, 24};
  const FlowField flow = dense_flow(prev, cur, bbox);
  for (auto _ : state) {
    benchmark::DoNotOptimize(movement_speed(flow));
  }
}
BENCHMARK(BM_MovementSpeed);

}  // namespace

BENCHMARK_MAIN();
