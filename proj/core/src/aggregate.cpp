#include "ambientis/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ambientis/errors.hpp"

namespace ambientis {

const char* phase_name(Phase p) {
  return p == Phase::Normal ? "normal" : "intervention";
}

std::optional<Phase> parse_phase(const std::string& name) {
  if (name == "normal" || name == "baseline") return Phase::Normal;
  if (name == "intervention") return Phase::Intervention;
  return std::nullopt;
}

namespace {

std::optional<double> ratio_or_absent(std::int64_t num, std::int64_t den) {
  if (den <= 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_or_absent(double sum, std::int64_t den) {
  if (den <= 0) return std::nullopt;
  return sum / static_cast<double>(den);
}

}  // namespace

std::optional<double> HourlyAggregate::sitting_ratio() const {
  return ratio_or_absent(frames_sitting, frames_classified);
}
std::optional<double> HourlyAggregate::standing_ratio() const {
  return ratio_or_absent(frames_standing, frames_classified);
}
std::optional<double> HourlyAggregate::other_ratio() const {
  return ratio_or_absent(frames_other, frames_classified);
}
std::optional<double> HourlyAggregate::inactivity_ratio() const {
  return ratio_or_absent(frames_inactive, frames_motion);
}
std::optional<double> HourlyAggregate::mean_scale() const {
  return mean_or_absent(sum_scale, frames_motion);
}
std::optional<double> HourlyAggregate::mean_speed() const {
  return mean_or_absent(sum_speed, frames_motion);
}

std::optional<double> DailySummary::sitting_ratio() const {
  return ratio_or_absent(frames_sitting, frames_classified);
}
std::optional<double> DailySummary::standing_ratio() const {
  return ratio_or_absent(frames_standing, frames_classified);
}
std::optional<double> DailySummary::other_ratio() const {
  return ratio_or_absent(frames_other, frames_classified);
}
std::optional<double> DailySummary::inactivity_ratio() const {
  return ratio_or_absent(frames_inactive, frames_motion);
}
std::optional<double> DailySummary::mean_scale() const {
  return mean_or_absent(sum_scale, frames_motion);
}
std::optional<double> DailySummary::mean_speed() const {
  return mean_or_absent(sum_speed, frames_motion);
}

namespace {

void tally(HourlyAggregate& hour, const FrameFeatures& f,
           std::int64_t frame_interval_ms) {
  ++hour.frames_total;
  if (!f.present) return;
  ++hour.frames_present;
  hour.presence_minutes +=
      static_cast<double>(frame_interval_ms) / static_cast<double>(kMsPerMinute);
  if (f.posture) {
    ++hour.frames_classified;
    switch (f.posture->label) {
      case PostureClass::Sitting: ++hour.frames_sitting; break;
      case PostureClass::Standing: ++hour.frames_standing; break;
      case PostureClass::Other: ++hour.frames_other; break;
    }
  }
  if (f.motion) {
    ++hour.frames_motion;
    if (f.motion->inactive) ++hour.frames_inactive;
    hour.sum_scale += f.motion->movement_scale;
    hour.sum_speed += f.motion->movement_speed;
  }
}

}  // namespace

HourlyAggregate frames_to_hour(std::span<const FrameFeatures> features,
                               std::int64_t frame_interval_ms, int tz_offset_min) {
  if (features.empty()) {
    throw std::invalid_argument("frames_to_hour: no features");
  }
  if (frame_interval_ms <= 0) {
    throw std::invalid_argument("frames_to_hour: frame interval must be positive");
  }
  const LocalBin bin = local_bin(features.front().timestamp_ms, tz_offset_min);
  HourlyAggregate hour;
  hour.date = bin.date;
  hour.hour = bin.hour;
  for (const FrameFeatures& f : features) {
    const LocalBin b = local_bin(f.timestamp_ms, tz_offset_min);
    if (b.date != bin.date || b.hour != bin.hour) {
      throw std::invalid_argument("frames_to_hour: features span multiple hours");
    }
    tally(hour, f, frame_interval_ms);
  }
  return hour;
}

DailySummary hours_to_day(std::span<const HourlyAggregate> hours, Phase phase) {
  if (hours.size() != 24) {
    throw std::invalid_argument("hours_to_day: need exactly 24 hourly aggregates");
  }
  std::array<bool, 24> seen{};
  DailySummary day;
  day.date = hours.front().date;
  day.phase = phase;
  for (const HourlyAggregate& h : hours) {
    if (h.date != day.date) {
      throw std::invalid_argument("hours_to_day: mixed dates");
    }
    if (h.hour < 0 || h.hour > 23 || seen[h.hour]) {
      throw std::invalid_argument("hours_to_day: missing or duplicate hour");
    }
    seen[h.hour] = true;
    day.hourly_profile[h.hour] = h.presence_minutes;
    day.appearance_minutes += h.presence_minutes;
    day.frames_present += h.frames_present;
    day.frames_classified += h.frames_classified;
    day.frames_motion += h.frames_motion;
    day.frames_sitting += h.frames_sitting;
    day.frames_standing += h.frames_standing;
    day.frames_other += h.frames_other;
    day.frames_inactive += h.frames_inactive;
    day.sum_scale += h.sum_scale;
    day.sum_speed += h.sum_speed;
    if (h.frames_total > 0) ++day.covered_hours;
  }
  return day;
}

std::vector<HourlyAggregate> aggregate_hours(std::span<const FrameFeatures> features,
                                             std::int64_t frame_interval_ms,
                                             int tz_offset_min) {
  if (frame_interval_ms <= 0) {
    throw std::invalid_argument("aggregate_hours: frame interval must be positive");
  }
  std::map<std::pair<LocalDate, int>, HourlyAggregate> cells;
  for (const FrameFeatures& f : features) {
    const LocalBin bin = local_bin(f.timestamp_ms, tz_offset_min);
    auto [it, inserted] = cells.try_emplace({bin.date, bin.hour});
    if (inserted) {
      it->second.date = bin.date;
      it->second.hour = bin.hour;
    }
    tally(it->second, f, frame_interval_ms);
  }

  std::vector<HourlyAggregate> out;
  LocalDate current{};
  bool have_date = false;
  for (const auto& [key, hour] : cells) {
    if (!have_date || key.first != current) {
      current = key.first;
      have_date = true;
      for (int h = 0; h < 24; ++h) {
        HourlyAggregate empty;
        empty.date = current;
        empty.hour = h;
        out.push_back(empty);
      }
    }
    out[out.size() - 24 + key.second] = hour;
  }
  return out;
}

Phase PhaseMap::phase_of(const LocalDate& date) const {
  const auto it = by_date.find(date);
  if (it != by_date.end()) return it->second;
  if (default_phase) return *default_phase;
  throw InputError("no phase mapped for date " + format_date(date));
}

void PhaseMap::add_range(const LocalDate& first, const LocalDate& last, Phase phase) {
  std::int64_t d0 = days_from_epoch(first);
  const std::int64_t d1 = days_from_epoch(last);
  if (d1 < d0) throw std::invalid_argument("PhaseMap::add_range: last before first");
  for (; d0 <= d1; ++d0) {
    by_date[date_from_epoch_days(d0)] = phase;
  }
}

std::vector<DailySummary> aggregate_days(std::span<const HourlyAggregate> hours,
                                         const PhaseMap& phases,
                                         int min_covered_hours) {
  std::map<LocalDate, std::vector<HourlyAggregate>> by_date;
  for (const HourlyAggregate& h : hours) {
    by_date[h.date].push_back(h);
  }
  std::vector<DailySummary> out;
  for (auto& [date, day_hours] : by_date) {
    std::sort(day_hours.begin(), day_hours.end(),
              [](const HourlyAggregate& a, const HourlyAggregate& b) {
                return a.hour < b.hour;
              });
    // Tolerate sparse input: hours never aggregated count as empty.
    std::vector<HourlyAggregate> full;
    full.reserve(24);
    std::size_t i = 0;
    for (int h = 0; h < 24; ++h) {
      if (i < day_hours.size() && day_hours[i].hour == h) {
        full.push_back(day_hours[i]);
        ++i;
      } else {
        HourlyAggregate empty;
        empty.date = date;
        empty.hour = h;
        full.push_back(empty);
      }
    }
    if (i != day_hours.size()) {
      throw std::invalid_argument("aggregate_days: duplicate hourly aggregate");
    }
    DailySummary day = hours_to_day(full, phases.phase_of(date));
    if (day.covered_hours >= min_covered_hours) {
      out.push_back(day);
    }
  }
  return out;
}

std::array<double, 24> mean_hourly_profile(std::span<const DailySummary> days) {
  if (days.empty()) {
    throw std::invalid_argument("mean_hourly_profile: no days");
  }
  std::array<double, 24> mean{};
  for (const DailySummary& d : days) {
    for (int h = 0; h < 24; ++h) mean[h] += d.hourly_profile[h];
  }
  for (double& v : mean) v /= static_cast<double>(days.size());
  return mean;
}

double band_change(const std::array<double, 24>& profile_a,
                   const std::array<double, 24>& profile_b,
                   int band_first_hour, int band_last_hour) {
  if (band_first_hour < 0 || band_last_hour > 23 ||
      band_first_hour > band_last_hour) {
    throw std::invalid_argument("band_change: invalid hour band");
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (int h = band_first_hour; h <= band_last_hour; ++h) {
    sum_a += profile_a[h];
    sum_b += profile_b[h];
  }
  if (sum_a == 0.0) {
    throw StatsError("band_change: baseline band total is zero");
  }
  return (sum_a - sum_b) / sum_a * 100.0;
}

namespace {

constexpr char kHourlyHeader[] =
    "date,hour,presence_minutes,frames_total,frames_present,frames_classified,"
    "frames_motion,frames_sitting,frames_standing,frames_other,frames_inactive,"
    "sum_scale,sum_speed";

std::string daily_header() {
  std::string h =
      "date,phase,appearance_minutes,frames_present,frames_classified,"
      "frames_motion,frames_sitting,frames_standing,frames_other,"
      "frames_inactive,sum_scale,sum_speed,covered_hours";
  for (int i = 0; i < 24; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, ",h%02d", i);
    h += buf;
  }
  return h;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& s, const std::string& what,
                          std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                      s + "'");
  }
}

std::int64_t parse_int_field(const std::string& s, const std::string& what,
                             std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                      s + "'");
  }
}

}  // namespace

void write_hourly_csv(const std::string& path,
                      std::span<const HourlyAggregate> hours) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << kHourlyHeader << '\n';
  for (const HourlyAggregate& h : hours) {
    out << format_date(h.date) << ',' << h.hour << ','
        << fmt_double(h.presence_minutes) << ',' << h.frames_total << ','
        << h.frames_present << ',' << h.frames_classified << ',' << h.frames_motion
        << ',' << h.frames_sitting << ',' << h.frames_standing << ','
        << h.frames_other << ',' << h.frames_inactive << ','
        << fmt_double(h.sum_scale) << ',' << fmt_double(h.sum_speed) << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

void write_daily_csv(const std::string& path, std::span<const DailySummary> days) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << daily_header() << '\n';
  for (const DailySummary& d : days) {
    out << format_date(d.date) << ',' << phase_name(d.phase) << ','
        << fmt_double(d.appearance_minutes) << ',' << d.frames_present << ','
        << d.frames_classified << ',' << d.frames_motion << ',' << d.frames_sitting
        << ',' << d.frames_standing << ',' << d.frames_other << ','
        << d.frames_inactive << ',' << fmt_double(d.sum_scale) << ','
        << fmt_double(d.sum_speed) << ',' << d.covered_hours;
    for (int h = 0; h < 24; ++h) out << ',' << fmt_double(d.hourly_profile[h]);
    out << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

std::vector<DailySummary> read_daily_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != daily_header()) {
    throw FormatError(path + ": unknown daily CSV header");
  }

  std::vector<DailySummary> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 13 + 24) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": expected 37 fields, got " + std::to_string(f.size()));
    }
    DailySummary d;
    d.date = parse_date(f[0]);
    const auto phase = parse_phase(f[1]);
    if (!phase) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": unknown phase '" + f[1] + "'");
    }
    d.phase = *phase;
    d.appearance_minutes = parse_double_field(f[2], "appearance_minutes", line_no);
    d.frames_present = parse_int_field(f[3], "frames_present", line_no);
    d.frames_classified = parse_int_field(f[4], "frames_classified", line_no);
    d.frames_motion = parse_int_field(f[5], "frames_motion", line_no);
    d.frames_sitting = parse_int_field(f[6], "frames_sitting", line_no);
    d.frames_standing = parse_int_field(f[7], "frames_standing", line_no);
    d.frames_other = parse_int_field(f[8], "frames_other", line_no);
    d.frames_inactive = parse_int_field(f[9], "frames_inactive", line_no);
    d.sum_scale = parse_double_field(f[10], "sum_scale", line_no);
    d.sum_speed = parse_double_field(f[11], "sum_speed", line_no);
    d.covered_hours =
        static_cast<int>(parse_int_field(f[12], "covered_hours", line_no));
    for (int h = 0; h < 24; ++h) {
      d.hourly_profile[h] =
          parse_double_field(f[13 + h], "hourly profile bin", line_no);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace ambientis
