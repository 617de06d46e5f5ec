#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace ambientis {

// Local calendar date. Hour binning works on local wall-clock time derived
// from a UTC timestamp plus a fixed timezone offset in minutes; there is no
// DST handling.
struct LocalDate {
  int year = 1970;
  int month = 1;  // 1-12
  int day = 1;    // 1-31

  bool operator==(const LocalDate&) const = default;
  auto operator<=>(const LocalDate&) const = default;
};

constexpr std::int64_t kMsPerMinute = 60'000;
constexpr std::int64_t kMsPerHour = 3'600'000;
constexpr std::int64_t kMsPerDay = 86'400'000;

// Floor division helper so pre-1970 timestamps bin correctly.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t positive_mod(std::int64_t a, std::int64_t b) {
  std::int64_t m = a % b;
  if (m < 0) m += b;
  return m;
}

// Days since 1970-01-01 for a local date.
inline std::int64_t days_from_epoch(const LocalDate& d) {
  const std::chrono::year_month_day ymd{std::chrono::year{d.year},
                                        std::chrono::month{static_cast<unsigned>(d.month)},
                                        std::chrono::day{static_cast<unsigned>(d.day)}};
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

inline LocalDate date_from_epoch_days(std::int64_t days) {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{days}}};
  return LocalDate{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

// 0 = Sunday ... 6 = Saturday, matching std::chrono::weekday c_encoding.
inline int weekday_of(const LocalDate& d) {
  return static_cast<int>(
      std::chrono::weekday{std::chrono::sys_days{std::chrono::days{days_from_epoch(d)}}}
          .c_encoding());
}

struct LocalBin {
  LocalDate date;
  int hour = 0;  // 0-23
};

// Bin a UTC millisecond timestamp into a local (date, hour) cell.
inline LocalBin local_bin(std::int64_t utc_ms, int tz_offset_min) {
  const std::int64_t local_ms = utc_ms + std::int64_t(tz_offset_min) * kMsPerMinute;
  const std::int64_t day = floor_div(local_ms, kMsPerDay);
  const int hour = static_cast<int>(positive_mod(local_ms, kMsPerDay) / kMsPerHour);
  return LocalBin{date_from_epoch_days(day), hour};
}

// UTC milliseconds of local midnight on the given local date.
inline std::int64_t utc_ms_at_local_midnight(const LocalDate& d, int tz_offset_min) {
  return days_from_epoch(d) * kMsPerDay - std::int64_t(tz_offset_min) * kMsPerMinute;
}

std::string format_date(const LocalDate& d);

// Parses "YYYY-MM-DD"; throws FormatError on malformed or invalid dates.
LocalDate parse_date(const std::string& text);

}  // namespace ambientis
