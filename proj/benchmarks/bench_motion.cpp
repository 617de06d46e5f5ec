#include <benchmark/benchmark.h>

#include "ambientis/motion.hpp"
#include "ambientis/rng.hpp"

namespace {

using namespace ambientis;

RawFrame noise_frame(Rng& rng, int width, int height) {
  RawFrame frame;
  frame.width = static_cast<std::uint16_t>(width);
  frame.height = static_cast<std::uint16_t>(height);
  frame.rgb.resize(std::size_t(width) * std::size_t(height) * 3);
  for (auto& byte : frame.rgb) {
    byte = static_cast<std::uint8_t>(rng.next_int(0, 255));
  }
  return frame;
}

void BM_ActivePixels(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const int h = static_cast<int>(state.range(1));
  Rng rng(1);
  const RawFrame prev = noise_frame(rng, w, h);
  const RawFrame cur = noise_frame(rng, w, h);
  const PixelRect bbox{0, 0, w, h};
  for (auto _ : state) {
    benchmark::DoNotOptimize(active_pixels(prev, cur, bbox, 90));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(w) * h);
}
BENCHMARK(BM_ActivePixels)->Args({64, 48})->Args({640, 480});

void BM_MovementScale(benchmark::State& state) {
  Rng rng(2);
  const RawFrame prev = noise_frame(rng, 64, 48);
  const RawFrame cur = noise_frame(rng, 64, 48);
  const PixelRect bbox{10, 6, 40, 36};
  const ActiveRegion region = active_pixels(prev, cur, bbox, 90);
  for (auto _ : state) {
    benchmark::DoNotOptimize(movement_scale(region, bbox));
  }
}
BENCHMARK(BM_MovementScale);

}  // namespace

BENCHMARK_MAIN();
