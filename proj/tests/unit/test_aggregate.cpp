#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "ambientis/aggregate.hpp"
#include "ambientis/errors.hpp"

using namespace ambientis;

namespace {

constexpr std::int64_t kInterval = 60'000;  // one frame a minute: easy arithmetic

FrameFeatures frame_at(std::int64_t ts, bool present,
                       std::optional<PostureClass> posture = std::nullopt,
                       std::optional<MotionFeatures> motion = std::nullopt) {
  FrameFeatures f;
  f.timestamp_ms = ts;
  f.present = present;
  if (posture) f.posture = PostureLabel{*posture, 0.9};
  f.motion = motion;
  return f;
}

std::int64_t at(const LocalDate& date, int hour, int minute, int tz = 0) {
  return utc_ms_at_local_midnight(date, tz) + hour * kMsPerHour + minute * kMsPerMinute;
}

const LocalDate kDay1{2024, 6, 3};
const LocalDate kDay2{2024, 6, 4};

MotionFeatures still_motion() {
  MotionFeatures m;
  m.inactive = true;
  return m;
}

MotionFeatures busy_motion(double scale, double speed) {
  MotionFeatures m;
  m.inactive = false;
  m.movement_scale = scale;
  m.movement_speed = speed;
  return m;
}

}  // namespace

TEST_CASE("hourly aggregation bins by local hour") {
  std::vector<FrameFeatures> features = {
      frame_at(at(kDay1, 9, 0), false),
      frame_at(at(kDay1, 9, 1), true, PostureClass::Sitting,
               busy_motion(0.25, 1.5)),
      frame_at(at(kDay1, 9, 2), true, PostureClass::Standing, still_motion()),
      frame_at(at(kDay1, 9, 3), true),  // present, first frame of a burst: no motion
      frame_at(at(kDay1, 10, 0), true, PostureClass::Other, busy_motion(0.5, 2.0)),
  };
  const std::vector<HourlyAggregate> hours = aggregate_hours(features, kInterval, 0);
  REQUIRE(hours.size() == 24);  // one day's worth of cells

  const HourlyAggregate& nine = hours[9];
  CHECK(nine.date == kDay1);
  CHECK(nine.hour == 9);
  CHECK(nine.frames_total == 4);
  CHECK(nine.frames_present == 3);
  CHECK(nine.presence_minutes == doctest::Approx(3.0));
  CHECK(nine.frames_classified == 2);
  CHECK(nine.frames_motion == 2);
  CHECK(nine.frames_sitting == 1);
  CHECK(nine.frames_standing == 1);
  CHECK(nine.frames_other == 0);
  CHECK(nine.frames_inactive == 1);
  CHECK(nine.sum_scale == doctest::Approx(0.25));
  CHECK(nine.sum_speed == doctest::Approx(1.5));
  CHECK(*nine.sitting_ratio() == doctest::Approx(0.5));
  CHECK(*nine.inactivity_ratio() == doctest::Approx(0.5));

  const HourlyAggregate& eight = hours[8];
  CHECK(eight.frames_total == 0);
  CHECK_FALSE(eight.sitting_ratio().has_value());
  CHECK_FALSE(eight.mean_speed().has_value());
}

TEST_CASE("timezone offset moves frames across midnight") {
  // 23:30 UTC is 00:30 next day at +60 minutes
  const std::int64_t ts = utc_ms_at_local_midnight(kDay1, 0) + 23 * kMsPerHour +
                          30 * kMsPerMinute;
  const std::vector<FrameFeatures> features = {frame_at(ts, true)};
  const std::vector<HourlyAggregate> hours = aggregate_hours(features, kInterval, 60);
  REQUIRE(hours.size() == 24);
  CHECK(hours[0].date == kDay2);
  CHECK(hours[0].hour == 0);
  CHECK(hours[0].frames_present == 1);
}

TEST_CASE("frames_to_hour rejects mixed hours and empty input") {
  std::vector<FrameFeatures> mixed = {frame_at(at(kDay1, 9, 59), true),
                                      frame_at(at(kDay1, 10, 0), true)};
  CHECK_THROWS_AS((void)frames_to_hour(mixed, kInterval, 0), std::invalid_argument);
  std::vector<FrameFeatures> empty;
  CHECK_THROWS_AS((void)frames_to_hour(empty, kInterval, 0), std::invalid_argument);
  std::vector<FrameFeatures> one = {frame_at(at(kDay1, 9, 0), true)};
  CHECK_THROWS_AS((void)frames_to_hour(one, 0, 0), std::invalid_argument);
}

TEST_CASE("hours_to_day wants exactly one full day of distinct hours") {
  std::vector<HourlyAggregate> hours;
  for (int h = 0; h < 24; ++h) {
    HourlyAggregate cell;
    cell.date = kDay1;
    cell.hour = h;
    cell.frames_total = h < 6 ? 10 : 0;
    cell.frames_present = h < 6 ? 4 : 0;
    cell.presence_minutes = h < 6 ? 4.0 : 0.0;
    hours.push_back(cell);
  }
  const DailySummary day = hours_to_day(hours, Phase::Normal);
  CHECK(day.date == kDay1);
  CHECK(day.appearance_minutes == doctest::Approx(24.0));
  CHECK(day.covered_hours == 6);
  CHECK(day.hourly_profile[3] == doctest::Approx(4.0));
  CHECK(day.hourly_profile[23] == 0.0);

  hours.pop_back();
  CHECK_THROWS_AS((void)hours_to_day(hours, Phase::Normal), std::invalid_argument);
  hours.push_back(hours[5]);  // 24 cells again, but hour 5 twice
  CHECK_THROWS_AS((void)hours_to_day(hours, Phase::Normal), std::invalid_argument);
}

TEST_CASE("daily aggregation applies the phase map and coverage filter") {
  std::vector<FrameFeatures> features;
  for (int m = 0; m < 30; ++m) {
    features.push_back(frame_at(at(kDay1, 9, m), true, PostureClass::Sitting));
  }
  features.push_back(frame_at(at(kDay1, 14, 0), false));
  for (int m = 0; m < 10; ++m) {
    features.push_back(frame_at(at(kDay2, 9, m), true, PostureClass::Standing));
  }
  const std::vector<HourlyAggregate> hours = aggregate_hours(features, kInterval, 0);
  REQUIRE(hours.size() == 48);

  PhaseMap phases;
  phases.add_range(kDay1, kDay1, Phase::Normal);
  phases.add_range(kDay2, kDay2, Phase::Intervention);

  const std::vector<DailySummary> days = aggregate_days(hours, phases);
  REQUIRE(days.size() == 2);
  CHECK(days[0].phase == Phase::Normal);
  CHECK(days[0].appearance_minutes == doctest::Approx(30.0));
  CHECK(days[0].covered_hours == 2);
  CHECK(days[1].phase == Phase::Intervention);
  CHECK(days[1].covered_hours == 1);

  const std::vector<DailySummary> filtered = aggregate_days(hours, phases, 2);
  REQUIRE(filtered.size() == 1);
  CHECK(filtered[0].date == kDay1);

  PhaseMap incomplete;
  incomplete.add_range(kDay1, kDay1, Phase::Normal);
  CHECK_THROWS_AS((void)aggregate_days(hours, incomplete), InputError);

  PhaseMap defaulted;
  defaulted.default_phase = Phase::Normal;
  const std::vector<DailySummary> defaults = aggregate_days(hours, defaulted);
  CHECK(defaults.size() == 2);
  CHECK(defaults[1].phase == Phase::Normal);
}

TEST_CASE("mean profile and band change") {
  DailySummary a, b;
  a.hourly_profile[2] = 10.0;
  a.hourly_profile[8] = 6.0;
  b.hourly_profile[2] = 20.0;
  b.hourly_profile[8] = 2.0;
  const std::vector<DailySummary> days = {a, b};
  const std::array<double, 24> profile = mean_hourly_profile(days);
  CHECK(profile[2] == doctest::Approx(15.0));
  CHECK(profile[8] == doctest::Approx(4.0));
  CHECK(profile[0] == 0.0);
  CHECK_THROWS_AS((void)mean_hourly_profile(std::vector<DailySummary>{}),
                  std::invalid_argument);

  std::array<double, 24> normal{}, intervention{};
  normal[1] = 12.0;
  normal[3] = 4.0;
  intervention[1] = 3.0;
  intervention[3] = 1.0;
  CHECK(band_change(normal, intervention, 0, 5) == doctest::Approx(75.0));
  CHECK_THROWS_AS((void)band_change(normal, intervention, 5, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)band_change(normal, intervention, 0, 24),
                  std::invalid_argument);
  std::array<double, 24> empty{};
  CHECK_THROWS_AS((void)band_change(empty, intervention, 0, 5), StatsError);
}

TEST_CASE("daily csv round trip preserves every field") {
  oracles::TempDir tmp("ambientis-agg");
  std::vector<FrameFeatures> features;
  for (int m = 0; m < 45; ++m) {
    features.push_back(frame_at(at(kDay1, 7, m), m % 3 != 0,
                                m % 3 == 1 ? std::optional(PostureClass::Sitting)
                                           : std::optional(PostureClass::Standing),
                                m % 3 == 2 ? std::optional(busy_motion(0.125, 0.75))
                                           : std::nullopt));
  }
  PhaseMap phases;
  phases.default_phase = Phase::Intervention;
  const std::vector<DailySummary> days =
      aggregate_days(aggregate_hours(features, kInterval, 0), phases);
  REQUIRE(days.size() == 1);

  const std::string path = tmp.file("daily.csv");
  write_daily_csv(path, days);
  const std::vector<DailySummary> back = read_daily_csv(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].date == days[0].date);
  CHECK(back[0].phase == days[0].phase);
  CHECK(back[0].appearance_minutes == doctest::Approx(days[0].appearance_minutes));
  CHECK(back[0].frames_present == days[0].frames_present);
  CHECK(back[0].frames_classified == days[0].frames_classified);
  CHECK(back[0].frames_motion == days[0].frames_motion);
  CHECK(back[0].frames_sitting == days[0].frames_sitting);
  CHECK(back[0].frames_standing == days[0].frames_standing);
  CHECK(back[0].frames_other == days[0].frames_other);
  CHECK(back[0].frames_inactive == days[0].frames_inactive);
  CHECK(back[0].sum_scale == doctest::Approx(days[0].sum_scale));
  CHECK(back[0].sum_speed == doctest::Approx(days[0].sum_speed));
  CHECK(back[0].covered_hours == days[0].covered_hours);
  for (int h = 0; h < 24; ++h) {
    CHECK(back[0].hourly_profile[h] == doctest::Approx(days[0].hourly_profile[h]));
  }
}

TEST_CASE("hourly csv has the documented header") {
  oracles::TempDir tmp("ambientis-agg");
  const std::vector<FrameFeatures> features = {frame_at(at(kDay1, 9, 0), true)};
  const std::string path = tmp.file("hourly.csv");
  write_hourly_csv(path, aggregate_hours(features, kInterval, 0));

  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header ==
        "date,hour,presence_minutes,frames_total,frames_present,frames_classified,"
        "frames_motion,frames_sitting,frames_standing,frames_other,frames_inactive,"
        "sum_scale,sum_speed");
  std::string row;
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 24);
}

TEST_CASE("malformed daily csv fails with the line number") {
  oracles::TempDir tmp("ambientis-agg");
  const std::string path = tmp.file("bad.csv");

  {
    std::ofstream out(path);
    out << "date,phase,nope\n";
  }
  CHECK_THROWS_AS((void)read_daily_csv(path), FormatError);

  {
    std::ofstream out(path);
    out << "date,phase,appearance_minutes,frames_present,frames_classified,"
           "frames_motion,frames_sitting,frames_standing,frames_other,"
           "frames_inactive,sum_scale,sum_speed,covered_hours";
    for (int h = 0; h < 24; ++h) out << ",h" << (h < 10 ? "0" : "") << h;
    out << "\n2024-06-03,normal,12.5\n";
  }
  CHECK_THROWS_WITH_AS((void)read_daily_csv(path),
                       doctest::Contains("line 2"), FormatError);

  CHECK_THROWS_AS((void)read_daily_csv(tmp.file("missing.csv")), InputError);
}

TEST_CASE("phase names parse both ways") {
  CHECK(parse_phase("normal") == Phase::Normal);
  CHECK(parse_phase("baseline") == Phase::Normal);
  CHECK(parse_phase("intervention") == Phase::Intervention);
  CHECK_FALSE(parse_phase("washout").has_value());
  CHECK(std::string(phase_name(Phase::Intervention)) == "intervention");
}
