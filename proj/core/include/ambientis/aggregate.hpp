#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambientis/features.hpp"
#include "ambientis/local_time.hpp"

namespace ambientis {

enum class Phase { Normal, Intervention };

const char* phase_name(Phase p);
std::optional<Phase> parse_phase(const std::string& name);

// One local (date, hour) cell of aggregated frame features.
//
// Denominators: posture ratios are over present-and-classified frames;
// inactivity ratio, mean scale and mean speed are over present frames that
// carry motion features. Hours with a zero denominator leave the respective
// ratios absent rather than zero.
struct HourlyAggregate {
  LocalDate date;
  int hour = 0;
  double presence_minutes = 0.0;  // (#present frames * frame interval) / 60000

  std::int64_t frames_total = 0;
  std::int64_t frames_present = 0;
  std::int64_t frames_classified = 0;  // present frames with a posture label
  std::int64_t frames_motion = 0;      // present frames with motion features

  std::int64_t frames_sitting = 0;
  std::int64_t frames_standing = 0;
  std::int64_t frames_other = 0;
  std::int64_t frames_inactive = 0;
  double sum_scale = 0.0;
  double sum_speed = 0.0;

  std::optional<double> sitting_ratio() const;
  std::optional<double> standing_ratio() const;
  std::optional<double> other_ratio() const;
  std::optional<double> inactivity_ratio() const;
  std::optional<double> mean_scale() const;
  std::optional<double> mean_speed() const;
};

// Daily roll-up: totals plus denominators so day-level ratios are exact
// frame-count quotients rather than averages of hourly averages.
struct DailySummary {
  LocalDate date;
  Phase phase = Phase::Normal;
  double appearance_minutes = 0.0;
  std::array<double, 24> hourly_profile{};  // presence minutes per local hour

  std::int64_t frames_present = 0;
  std::int64_t frames_classified = 0;
  std::int64_t frames_motion = 0;
  std::int64_t frames_sitting = 0;
  std::int64_t frames_standing = 0;
  std::int64_t frames_other = 0;
  std::int64_t frames_inactive = 0;
  double sum_scale = 0.0;
  double sum_speed = 0.0;

  int covered_hours = 0;  // hours of the day that saw any frames at all

  std::optional<double> sitting_ratio() const;
  std::optional<double> standing_ratio() const;
  std::optional<double> other_ratio() const;
  std::optional<double> inactivity_ratio() const;
  std::optional<double> mean_scale() const;
  std::optional<double> mean_speed() const;
};

// Aggregates features that all fall into one local (date, hour) cell.
// Throws std::invalid_argument if they span more than one cell.
HourlyAggregate frames_to_hour(std::span<const FrameFeatures> features,
                               std::int64_t frame_interval_ms, int tz_offset_min);

// Rolls exactly 24 hourly aggregates (hours 0..23 of one date) into a daily
// summary. Throws std::invalid_argument on missing or duplicate hours or
// mixed dates.
DailySummary hours_to_day(std::span<const HourlyAggregate> hours, Phase phase);

// Groups a feature stream by local (date, hour), fills empty hours, and
// returns aggregates ordered by date then hour, covering every hour of every
// date that appears in the stream.
std::vector<HourlyAggregate> aggregate_hours(std::span<const FrameFeatures> features,
                                             std::int64_t frame_interval_ms,
                                             int tz_offset_min);

// Maps local dates to phases. Dates with no entry fall back to default_phase
// when set, otherwise aggregate_days throws InputError.
struct PhaseMap {
  std::map<LocalDate, Phase> by_date;
  std::optional<Phase> default_phase;

  Phase phase_of(const LocalDate& date) const;  // throws InputError when unmapped
  void add_range(const LocalDate& first, const LocalDate& last, Phase phase);
};

// Full roll-up: hourly aggregates -> one DailySummary per local date, ordered
// by date. min_covered_hours drops partially monitored days below the bar
// (0 keeps every day).
std::vector<DailySummary> aggregate_days(std::span<const HourlyAggregate> hours,
                                         const PhaseMap& phases,
                                         int min_covered_hours = 0);

// Per-bin arithmetic mean of hourly presence minutes across days.
// Throws std::invalid_argument on empty input.
std::array<double, 24> mean_hourly_profile(std::span<const DailySummary> days);

// Signed percent change of the band total from profile_a to profile_b:
// (sum_a - sum_b) / sum_a * 100, positive = reduction. The band is an
// inclusive hour range. Throws std::invalid_argument for an invalid band,
// StatsError when the baseline band total is zero.
double band_change(const std::array<double, 24>& profile_a,
                   const std::array<double, 24>& profile_b,
                   int band_first_hour, int band_last_hour);

// CSV I/O. Headers are fixed and documented in the README; readers reject
// unknown headers with FormatError.
void write_hourly_csv(const std::string& path,
                      std::span<const HourlyAggregate> hours);
void write_daily_csv(const std::string& path, std::span<const DailySummary> days);
std::vector<DailySummary> read_daily_csv(const std::string& path);

}  // namespace ambientis
