#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ambientis/aggregate.hpp"
#include "ambientis/frame.hpp"
#include "ambientis/geometry.hpp"
#include "ambientis/local_time.hpp"
#include "ambientis/posture.hpp"

namespace ambientis {

enum class MotionLevel { None, Small, Large };

const char* motion_level_name(MotionLevel m);
std::optional<MotionLevel> parse_motion_level(const std::string& name);

// One scheduled occupancy interval within a day. Times are milliseconds
// since local midnight, end exclusive. skip_every = k drops the entry on
// every k-th day of its phase (counted within the phase), which gives
// scenarios day-to-day variance that stays exactly reproducible; 0 never
// skips.
struct ScheduleEntry {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  PostureClass posture = PostureClass::Standing;
  MotionLevel motion = MotionLevel::None;
  double speed_px = 0.0;  // injected displacement per frame
  int skip_every = 0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  int width = 64;
  int height = 48;
  int occupant_w = 20;
  int occupant_h = 36;
  std::int64_t frame_interval_ms = 200;  // default fixture rate: 5 fps
  int tz_offset_min = 0;
  LocalDate start_date{2024, 6, 3};
  std::vector<Phase> day_phases;               // one label per monitored day
  std::vector<ScheduleEntry> schedule_normal;
  std::vector<ScheduleEntry> schedule_intervention;
  double detector_noise_sigma = 0.0;  // probability jitter for scenario detectors
  int pixel_noise = 0;                // per-channel uniform amplitude
  int active_threshold = 90;          // threshold the ledger's pixel truth uses
  std::int64_t lead_in_ms = 2000;     // background margin recorded around entries
  std::uint64_t seed = 1;
};

// Parses the human-editable scenario format (documented in the README).
// Throws InputError when the file cannot be read, FormatError on malformed
// or invalid content.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin);

// Throws FormatError on invalid configs (overlapping entries, bad times,
// occupant larger than the frame, no days).
void validate_scenario(const ScenarioConfig& config);

// Simulator-side truth for one frame. Pixel truth (active_count/active_bbox,
// from a naive per-pixel diff of the rendered frames at the scenario's
// active_threshold) is present on every frame but the first of the stream.
struct FrameTruth {
  std::int64_t timestamp_ms = 0;
  bool present = false;
  PostureClass posture = PostureClass::Other;
  PixelRect bbox;          // meaningful when present
  Skeleton skeleton;       // meaningful when present
  double dx = 0.0;         // injected displacement this frame
  double dy = 0.0;
  bool has_pixel_truth = false;
  std::int64_t active_count = 0;
  std::optional<PixelRect> active_bbox;
};

// Exact per-day tallies, summed from per-frame truth. Presence minutes are
// frame-quantized (frames * interval), so they sum exactly.
struct DayTruth {
  LocalDate date;
  Phase phase = Phase::Normal;
  std::array<double, 24> presence_minutes{};
  std::int64_t frames_present = 0;
  std::int64_t frames_sitting = 0;
  std::int64_t frames_standing = 0;
  std::int64_t frames_other = 0;
  std::int64_t frames_motion = 0;   // present frames with pixel truth
  std::int64_t frames_inactive = 0;
  double sum_scale = 0.0;           // from truth active bboxes
  double sum_speed = 0.0;           // from injected displacements
};

struct GroundTruthLedger {
  std::string scenario_name;
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;
  std::int64_t frame_interval_ms = 0;
  int tz_offset_min = 0;
  int active_threshold = 90;
  std::vector<FrameTruth> frames;  // in timestamp order
  std::vector<DayTruth> days;

  // Truth for an exact timestamp, nullptr when unknown.
  const FrameTruth* find(std::int64_t timestamp_ms) const;
};

// Full generation pass: renders every frame deterministically from
// (config, seed), hands each to the sink, and returns the completed ledger
// including pixel truth. Frames arrive in timestamp order; the sink owns
// each frame it receives.
GroundTruthLedger generate(const ScenarioConfig& config,
                           const std::function<void(RawFrame&&)>& sink);

// generate() straight into a fixture file.
GroundTruthLedger generate_fixture(const ScenarioConfig& config,
                                   const std::string& fixture_path);

// Schedule-level truth only (no rendering, no pixel truth): enough for
// scenario-channel detectors against a lazily generated stream.
GroundTruthLedger schedule_ledger(const ScenarioConfig& config);

// Lazy stream over the scenario: frames render on demand, nothing is
// retained. Rendering is a pure function of (config, frame index), so the
// stream is byte-identical to what generate() hands its sink.
std::unique_ptr<FrameStream> open_scenario_stream(const ScenarioConfig& config);

// Brute-force daily summaries computed directly from ledger truth,
// independent of the aggregation code path.
std::vector<DailySummary> oracle_summaries(const GroundTruthLedger& ledger);

void write_ledger_json(const std::string& path, const GroundTruthLedger& ledger);
GroundTruthLedger read_ledger_json(const std::string& path);

}  // namespace ambientis
