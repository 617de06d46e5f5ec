#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "ambientis/errors.hpp"
#include "ambientis/pipeline.hpp"
#include "ambientis/simulator.hpp"

using namespace ambientis;

namespace {

const char* kScenario = R"(
[scenario]
name = pipe
width = 32
height = 24
occupant_width = 10
occupant_height = 16
frame_interval_ms = 500
start_date = 2024-06-03
phases = normal
seed = 12
pixel_noise = 2
lead_in_ms = 2000

[normal]
10:00:00 10:01:00 standing small 0.4
12:00:00 12:00:30 sitting none 0.0

[intervention]
)";

PipelineConfig scenario_config(const ScenarioConfig& cfg) {
  PipelineConfig pc;
  pc.pose_detector = "scenario-pose";
  pc.object_detector = "scenario-object";
  pc.active_threshold = cfg.active_threshold;
  pc.tz_offset_min = cfg.tz_offset_min;
  return pc;
}

}  // namespace

TEST_CASE("pipeline config file parsing") {
  oracles::TempDir tmp("ambientis-pipe");
  const std::string path = tmp.file("pipeline.conf");
  {
    std::ofstream out(path);
    out << "# comment\n"
           "pose_detector = scenario-pose\n"
           "object_detector = scenario-object\n"
           "classifier = geometric-baseline\n"
           "active_threshold = 120\n"
           "speed_domain = active\n"
           "timezone_offset_min = -300\n"
           "detector_noise_sigma = 0.1\n"
           "detector_noise_seed = 9\n"
           "flow_window_radius = 3\n"
           "flow_iterations = 6\n";
  }
  const PipelineConfig pc = parse_pipeline_config(path);
  CHECK(pc.pose_detector == "scenario-pose");
  CHECK(pc.object_detector == "scenario-object");
  CHECK(pc.active_threshold == 120);
  CHECK(pc.speed_domain == SpeedDomain::Active);
  CHECK(pc.tz_offset_min == -300);
  CHECK(pc.detector_noise_sigma == doctest::Approx(0.1));
  CHECK(pc.detector_noise_seed == 9);
  CHECK(pc.flow.window_radius == 3);
  CHECK(pc.flow.iterations == 6);

  {
    std::ofstream out(path);
    out << "mystery_knob = 1\n";
  }
  CHECK_THROWS_AS((void)parse_pipeline_config(path), FormatError);
  CHECK_THROWS_AS((void)parse_pipeline_config(tmp.file("nope.conf")), InputError);
}

TEST_CASE("extractor emits presence, posture, then motion once a prev frame exists") {
  const ScenarioConfig cfg = parse_scenario_text(kScenario, "pipe");
  const GroundTruthLedger ledger = schedule_ledger(cfg);
  FeatureExtractor extractor(scenario_config(cfg), &ledger);

  const auto stream = open_scenario_stream(cfg);
  std::vector<FrameFeatures> features;
  while (auto frame = stream->next()) {
    features.push_back(extractor.process(std::move(*frame)));
  }
  REQUIRE_FALSE(features.empty());

  int present_frames = 0, with_posture = 0, with_motion = 0;
  bool saw_present_before = false;
  for (const FrameFeatures& f : features) {
    if (f.present) {
      ++present_frames;
      if (f.posture) ++with_posture;
      if (f.motion) ++with_motion;
      saw_present_before = true;
    } else {
      CHECK_FALSE(f.posture.has_value());
      CHECK_FALSE(f.motion.has_value());
    }
  }
  // every present frame gets a posture from the scenario pose detector
  CHECK(with_posture == present_frames);
  // lead-in guarantees a prev frame exists for every present frame
  CHECK(saw_present_before);
  CHECK(with_motion == present_frames);
  CHECK(present_frames == 120 + 60);

  // standing entry moves its limb texture; sitting entry with no motion is inactive
  int inactive = 0;
  for (const FrameFeatures& f : features) {
    if (f.motion && f.motion->inactive) ++inactive;
  }
  CHECK(inactive > 0);
  CHECK(inactive < present_frames);
}

TEST_CASE("run_pipeline equals a manual process loop") {
  const ScenarioConfig cfg = parse_scenario_text(kScenario, "pipe");
  const GroundTruthLedger ledger = schedule_ledger(cfg);

  const auto stream = open_scenario_stream(cfg);
  const std::vector<FrameFeatures> piped =
      run_pipeline(*stream, scenario_config(cfg), &ledger);

  FeatureExtractor extractor(scenario_config(cfg), &ledger);
  const auto stream2 = open_scenario_stream(cfg);
  std::vector<FrameFeatures> manual;
  while (auto frame = stream2->next()) {
    manual.push_back(extractor.process(std::move(*frame)));
  }

  REQUIRE(piped.size() == manual.size());
  for (std::size_t i = 0; i < piped.size(); ++i) {
    CHECK(piped[i].timestamp_ms == manual[i].timestamp_ms);
    CHECK(piped[i].present == manual[i].present);
    CHECK(piped[i].posture.has_value() == manual[i].posture.has_value());
    if (piped[i].motion) {
      CHECK(piped[i].motion->movement_scale ==
            doctest::Approx(manual[i].motion->movement_scale));
      CHECK(piped[i].motion->movement_speed ==
            doctest::Approx(manual[i].motion->movement_speed));
    }
  }
}

TEST_CASE("non-increasing timestamps are rejected") {
  const ScenarioConfig cfg = parse_scenario_text(kScenario, "pipe");
  const GroundTruthLedger ledger = schedule_ledger(cfg);
  FeatureExtractor extractor(scenario_config(cfg), &ledger);

  const auto stream = open_scenario_stream(cfg);
  auto first = stream->next();
  REQUIRE(first.has_value());
  const std::int64_t ts = first->timestamp_ms;
  (void)extractor.process(std::move(*first));

  RawFrame stale;
  stale.timestamp_ms = ts;
  stale.width = std::uint16_t(cfg.width);
  stale.height = std::uint16_t(cfg.height);
  stale.rgb.assign(std::size_t(cfg.width) * cfg.height * 3, 0);
  CHECK_THROWS_AS((void)extractor.process(std::move(stale)), FormatError);
}

TEST_CASE("speed domain changes the averaging region") {
  const ScenarioConfig cfg = parse_scenario_text(kScenario, "pipe");
  const GroundTruthLedger ledger = schedule_ledger(cfg);

  PipelineConfig bbox_cfg = scenario_config(cfg);
  bbox_cfg.speed_domain = SpeedDomain::Bbox;
  PipelineConfig active_cfg = scenario_config(cfg);
  active_cfg.speed_domain = SpeedDomain::Active;

  const auto s1 = open_scenario_stream(cfg);
  const auto s2 = open_scenario_stream(cfg);
  const std::vector<FrameFeatures> by_bbox = run_pipeline(*s1, bbox_cfg, &ledger);
  const std::vector<FrameFeatures> by_active = run_pipeline(*s2, active_cfg, &ledger);

  REQUIRE(by_bbox.size() == by_active.size());
  bool differed = false;
  for (std::size_t i = 0; i < by_bbox.size(); ++i) {
    if (!by_bbox[i].motion || !by_active[i].motion) continue;
    // active-masked speed averages over fewer, faster pixels
    if (by_active[i].motion->movement_speed >
        by_bbox[i].motion->movement_speed + 1e-9) {
      differed = true;
    }
  }
  CHECK(differed);
}

TEST_CASE("invalid active threshold is rejected at construction") {
  PipelineConfig pc;
  pc.active_threshold = 0;
  CHECK_THROWS_AS(FeatureExtractor(pc, nullptr), InputError);
  pc.active_threshold = 800;
  CHECK_THROWS_AS(FeatureExtractor(pc, nullptr), InputError);
}

TEST_CASE("ledger can come from a sidecar file") {
  oracles::TempDir tmp("ambientis-pipe");
  const ScenarioConfig cfg = parse_scenario_text(kScenario, "pipe");
  const GroundTruthLedger ledger = schedule_ledger(cfg);
  const std::string ledger_path = tmp.file("ledger.json");
  write_ledger_json(ledger_path, ledger);

  PipelineConfig pc = scenario_config(cfg);
  pc.ledger_path = ledger_path;
  const auto stream = open_scenario_stream(cfg);
  const std::vector<FrameFeatures> features = run_pipeline(*stream, pc);
  CHECK(features.size() == ledger.frames.size());
  std::int64_t present = 0;
  for (const FrameFeatures& f : features) present += f.present ? 1 : 0;
  CHECK(present == 180);
}
