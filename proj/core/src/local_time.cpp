#include "ambientis/local_time.hpp"

#include <cstdio>

#include "ambientis/errors.hpp"

namespace ambientis {

std::string format_date(const LocalDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

LocalDate parse_date(const std::string& text) {
  int y = 0, m = 0, dd = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &dd, &tail) != 3) {
    throw FormatError("invalid date '" + text + "', expected YYYY-MM-DD");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(dd)}};
  if (!ymd.ok()) {
    throw FormatError("invalid calendar date '" + text + "'");
  }
  return LocalDate{y, m, dd};
}

}  // namespace ambientis
