#include <benchmark/benchmark.h>

#include "ambientis/aggregate.hpp"
#include "ambientis/local_time.hpp"
#include "ambientis/pipeline.hpp"
#include "ambientis/simulator.hpp"

namespace {

using namespace ambientis;

// One monitored day with a single minute-long sitting visit: roughly 320
// frames per pass through the pipeline, flow and all.
ScenarioConfig bench_scenario() {
  ScenarioConfig cfg;
  cfg.name = "bench";
  cfg.width = 64;
  cfg.height = 48;
  cfg.occupant_w = 20;
  cfg.occupant_h = 36;
  cfg.frame_interval_ms = 200;
  cfg.start_date = LocalDate{2024, 6, 3};
  cfg.day_phases = {Phase::Normal};
  ScheduleEntry entry;
  entry.start_ms = 9 * kMsPerHour;
  entry.end_ms = entry.start_ms + 60'000;
  entry.posture = PostureClass::Sitting;
  entry.motion = MotionLevel::Small;
  entry.speed_px = 0.3;
  cfg.schedule_normal = {entry};
  cfg.pixel_noise = 3;
  cfg.seed = 6;
  return cfg;
}

PipelineConfig bench_pipeline_config(const ScenarioConfig& cfg) {
  PipelineConfig pc;
  pc.pose_detector = "scenario-pose";
  pc.object_detector = "scenario-object";
  pc.active_threshold = cfg.active_threshold;
  pc.detector_noise_seed = cfg.seed;
  return pc;
}

void BM_RunPipeline(benchmark::State& state) {
  const ScenarioConfig cfg = bench_scenario();
  const GroundTruthLedger ledger = schedule_ledger(cfg);
  const PipelineConfig pc = bench_pipeline_config(cfg);
  std::int64_t frames = 0;
  for (auto _ : state) {
    const auto stream = open_scenario_stream(cfg);
    const auto features = run_pipeline(*stream, pc, &ledger);
    frames += std::int64_t(features.size());
    benchmark::DoNotOptimize(features.data());
  }
  state.SetItemsProcessed(frames);
  state.SetLabel("frames/s in items/s");
}
BENCHMARK(BM_RunPipeline)->Unit(benchmark::kMillisecond);

void BM_AggregateHours(benchmark::State& state) {
  const ScenarioConfig cfg = bench_scenario();
  const GroundTruthLedger ledger = schedule_ledger(cfg);
  const auto stream = open_scenario_stream(cfg);
  const auto features = run_pipeline(*stream, bench_pipeline_config(cfg), &ledger);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        aggregate_hours(features, cfg.frame_interval_ms, cfg.tz_offset_min));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(features.size()));
}
BENCHMARK(BM_AggregateHours);

}  // namespace

BENCHMARK_MAIN();
