#include "ambientis/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ambientis/errors.hpp"
#include "ambientis/fixture.hpp"
#include "ambientis/rng.hpp"
#include "ambientis/skeleton_corpus.hpp"

namespace ambientis {

const char* motion_level_name(MotionLevel m) {
  switch (m) {
    case MotionLevel::None: return "none";
    case MotionLevel::Small: return "small";
    case MotionLevel::Large: return "large";
  }
  return "none";
}

std::optional<MotionLevel> parse_motion_level(const std::string& name) {
  if (name == "none") return MotionLevel::None;
  if (name == "small") return MotionLevel::Small;
  if (name == "large") return MotionLevel::Large;
  return std::nullopt;
}

namespace {

// ---------------------------------------------------------------- parsing

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void bad_line(const std::string& origin, std::size_t line_no,
                           const std::string& what) {
  throw FormatError(origin + ":" + std::to_string(line_no) + ": " + what);
}

std::int64_t parse_i64(const std::string& s, const std::string& origin,
                       std::size_t line_no, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_line(origin, line_no, "bad " + what + " '" + s + "'");
  }
}

double parse_f64(const std::string& s, const std::string& origin,
                 std::size_t line_no, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_line(origin, line_no, "bad " + what + " '" + s + "'");
  }
}

// HH:MM, HH:MM:SS or HH:MM:SS.fff as milliseconds since local midnight.
// 24:00 (and 24:00:00) is a valid exclusive end bound.
std::int64_t parse_time_of_day(const std::string& s, const std::string& origin,
                               std::size_t line_no) {
  int hh = 0, mm = 0, ss = 0, fff = 0;
  int frac_digits = 0;
  std::size_t i = 0;
  const auto read_int2 = [&](int& out) {
    if (i + 2 > s.size() || !std::isdigit(static_cast<unsigned char>(s[i])) ||
        !std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      bad_line(origin, line_no, "bad time '" + s + "'");
    }
    out = (s[i] - '0') * 10 + (s[i + 1] - '0');
    i += 2;
  };
  read_int2(hh);
  if (i >= s.size() || s[i] != ':') bad_line(origin, line_no, "bad time '" + s + "'");
  ++i;
  read_int2(mm);
  if (i < s.size()) {
    if (s[i] != ':') bad_line(origin, line_no, "bad time '" + s + "'");
    ++i;
    read_int2(ss);
    if (i < s.size()) {
      if (s[i] != '.') bad_line(origin, line_no, "bad time '" + s + "'");
      ++i;
      while (i < s.size() && frac_digits < 3) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
          bad_line(origin, line_no, "bad time '" + s + "'");
        }
        fff = fff * 10 + (s[i] - '0');
        ++i;
        ++frac_digits;
      }
      if (i != s.size()) bad_line(origin, line_no, "bad time '" + s + "'");
      for (; frac_digits < 3; ++frac_digits) fff *= 10;
    }
  }
  if (hh > 24 || mm > 59 || ss > 59) {
    bad_line(origin, line_no, "time out of range '" + s + "'");
  }
  const std::int64_t ms =
      std::int64_t(hh) * kMsPerHour + std::int64_t(mm) * kMsPerMinute +
      std::int64_t(ss) * 1000 + fff;
  if (ms > kMsPerDay) bad_line(origin, line_no, "time past 24:00 '" + s + "'");
  return ms;
}

ScheduleEntry parse_schedule_line(const std::string& line, const std::string& origin,
                                  std::size_t line_no) {
  const std::vector<std::string> tok = split_ws(line);
  if (tok.size() < 5 || tok.size() > 6) {
    bad_line(origin, line_no,
             "schedule entry needs: start end posture motion speed [skip_every]");
  }
  ScheduleEntry e;
  e.start_ms = parse_time_of_day(tok[0], origin, line_no);
  e.end_ms = parse_time_of_day(tok[1], origin, line_no);
  const auto posture = parse_posture(tok[2]);
  if (!posture) bad_line(origin, line_no, "unknown posture '" + tok[2] + "'");
  e.posture = *posture;
  const auto motion = parse_motion_level(tok[3]);
  if (!motion) bad_line(origin, line_no, "unknown motion level '" + tok[3] + "'");
  e.motion = *motion;
  e.speed_px = parse_f64(tok[4], origin, line_no, "speed");
  if (tok.size() == 6) {
    e.skip_every = static_cast<int>(parse_i64(tok[5], origin, line_no, "skip_every"));
  }
  return e;
}

void parse_phases_value(const std::string& value, const std::string& origin,
                        std::size_t line_no, std::vector<Phase>& out) {
  out.clear();
  for (const std::string& tok : split_ws(value)) {
    std::string name = tok;
    long long count = 1;
    const auto star = tok.find('*');
    if (star != std::string::npos) {
      name = tok.substr(0, star);
      count = parse_i64(tok.substr(star + 1), origin, line_no, "phase repeat");
      if (count < 1 || count > 10000) {
        bad_line(origin, line_no, "phase repeat out of range in '" + tok + "'");
      }
    }
    const auto phase = parse_phase(name);
    if (!phase) bad_line(origin, line_no, "unknown phase '" + name + "'");
    out.insert(out.end(), static_cast<std::size_t>(count), *phase);
  }
}

// ------------------------------------------------------------- day plans

struct Window {
  std::int64_t begin = 0;  // local ms, inclusive
  std::int64_t end = 0;    // local ms, exclusive
};

struct PlannedEntry {
  ScheduleEntry entry;
  int entry_index = 0;  // index into the phase schedule, for seeding
};

struct DayPlan {
  int day_index = 0;
  Phase phase = Phase::Normal;
  LocalDate date;
  std::int64_t midnight_utc = 0;
  std::vector<PlannedEntry> entries;
  std::vector<Window> windows;
};

std::vector<DayPlan> make_day_plans(const ScenarioConfig& cfg) {
  std::vector<DayPlan> plans;
  const std::int64_t first_day = days_from_epoch(cfg.start_date);
  int phase_days_seen[2] = {0, 0};

  for (std::size_t k = 0; k < cfg.day_phases.size(); ++k) {
    DayPlan plan;
    plan.day_index = static_cast<int>(k);
    plan.phase = cfg.day_phases[k];
    plan.date = date_from_epoch_days(first_day + static_cast<std::int64_t>(k));
    plan.midnight_utc = utc_ms_at_local_midnight(plan.date, cfg.tz_offset_min);

    const int day_in_phase = ++phase_days_seen[plan.phase == Phase::Normal ? 0 : 1];
    const std::vector<ScheduleEntry>& schedule = plan.phase == Phase::Normal
                                                     ? cfg.schedule_normal
                                                     : cfg.schedule_intervention;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      const ScheduleEntry& e = schedule[i];
      if (e.skip_every > 0 && day_in_phase % e.skip_every == 0) continue;
      plan.entries.push_back(PlannedEntry{e, static_cast<int>(i)});
    }

    std::vector<Window> windows;
    for (const PlannedEntry& pe : plan.entries) {
      windows.push_back(Window{std::max<std::int64_t>(0, pe.entry.start_ms - cfg.lead_in_ms),
                               std::min(kMsPerDay, pe.entry.end_ms + cfg.lead_in_ms)});
    }
    std::sort(windows.begin(), windows.end(),
              [](const Window& a, const Window& b) { return a.begin < b.begin; });
    for (const Window& w : windows) {
      if (!plan.windows.empty() && w.begin <= plan.windows.back().end) {
        plan.windows.back().end = std::max(plan.windows.back().end, w.end);
      } else {
        plan.windows.push_back(w);
      }
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

// ------------------------------------------------------------- rendering

// Seed stream tags.
constexpr std::uint64_t kBgStream = 1;
constexpr std::uint64_t kBodyStream = 2;
constexpr std::uint64_t kLimbStream = 3;
constexpr std::uint64_t kNoiseStream = 4;
constexpr std::uint64_t kPlacementStream = 5;

constexpr double kJointConfidence = 0.9;

double lattice_value(std::uint64_t seed, std::int64_t cx, std::int64_t cy) {
  return static_cast<double>(
             hash_mix(seed, static_cast<std::uint64_t>(cx),
                      static_cast<std::uint64_t>(cy)) >>
             11) *
         0x1.0p-53;
}

// Spatially correlated value noise: bilinear blend of hash values on a
// coarse lattice. Correlation matters: iid pixel noise aliases away under
// pyramid downsampling, correlated texture survives it.
double value_noise(std::uint64_t seed, std::int64_t x, std::int64_t y, int cell) {
  const std::int64_t cx = floor_div(x, cell);
  const std::int64_t cy = floor_div(y, cell);
  const double fx =
      static_cast<double>(positive_mod(x, cell)) / static_cast<double>(cell);
  const double fy =
      static_cast<double>(positive_mod(y, cell)) / static_cast<double>(cell);
  const double v00 = lattice_value(seed, cx, cy);
  const double v10 = lattice_value(seed, cx + 1, cy);
  const double v01 = lattice_value(seed, cx, cy + 1);
  const double v11 = lattice_value(seed, cx + 1, cy + 1);
  const double top = v00 * (1.0 - fx) + v10 * fx;
  const double bot = v01 * (1.0 - fx) + v11 * fx;
  return top * (1.0 - fy) + bot * fy;
}

struct BodyState {
  bool present = false;
  const PlannedEntry* entry = nullptr;
  std::int64_t frame_in_entry = 0;  // grid frames since the entry opened
  PixelRect bbox;
  double dx = 0.0;
  double dy = 0.0;
};

// Closed-form horizontal position: the occupant starts at a hashed offset
// and, under large motion, bounces between the frame margins as a triangle
// wave of the frame counter. Evaluating by formula (not by stepping) keeps
// random access over frames exact.
int occupant_x(const ScenarioConfig& cfg, const DayPlan& plan,
               const PlannedEntry& pe, std::int64_t n, int x_min, int x_max) {
  const std::uint64_t h =
      hash_mix(cfg.seed, kPlacementStream, static_cast<std::uint64_t>(plan.day_index),
               static_cast<std::uint64_t>(pe.entry_index));
  if (x_max <= x_min) return x_min;
  const int span = x_max - x_min;
  const int x0 = x_min + static_cast<int>(h % static_cast<std::uint64_t>(span + 1));
  if (pe.entry.motion != MotionLevel::Large || pe.entry.speed_px <= 0.0) {
    return x0;
  }
  const double len = static_cast<double>(span);
  const double offset0 = static_cast<double>(x0 - x_min);
  const double start = ((h >> 32) & 1) ? offset0 : 2.0 * len - offset0;
  const double s = std::fmod(start + static_cast<double>(n) * pe.entry.speed_px,
                             2.0 * len);
  const double tri = s <= len ? s : 2.0 * len - s;
  return x_min + static_cast<int>(std::llround(tri));
}

BodyState body_state_at(const ScenarioConfig& cfg, const DayPlan& plan,
                        std::int64_t t_local_ms) {
  BodyState state;
  for (const PlannedEntry& pe : plan.entries) {
    if (t_local_ms < pe.entry.start_ms || t_local_ms >= pe.entry.end_ms) continue;
    state.present = true;
    state.entry = &pe;
    const std::int64_t first_j =
        (pe.entry.start_ms + cfg.frame_interval_ms - 1) / cfg.frame_interval_ms;
    const std::int64_t n = t_local_ms / cfg.frame_interval_ms - first_j;
    state.frame_in_entry = n;

    const int x_min = std::min(1, std::max(0, cfg.width - cfg.occupant_w));
    const int x_max = std::max(x_min, cfg.width - cfg.occupant_w - 1);
    const int y = std::max(0, cfg.height - cfg.occupant_h - 1);
    const int x = occupant_x(cfg, plan, pe, n, x_min, x_max);
    state.bbox = PixelRect{x, y, cfg.occupant_w, cfg.occupant_h};
    if (n > 0) {
      const int x_prev = occupant_x(cfg, plan, pe, n - 1, x_min, x_max);
      state.dx = static_cast<double>(x - x_prev);
    }
    return state;
  }
  return state;
}

Skeleton skeleton_for(PostureClass posture, const PixelRect& bbox) {
  const double h = static_cast<double>(bbox.h);
  const double cx = static_cast<double>(bbox.x) + static_cast<double>(bbox.w) / 2.0;
  double knee_deg = 0.0, torso_ratio = 0.0, drop = 0.0, hip_frac = 0.0;
  switch (posture) {
    case PostureClass::Standing:
      knee_deg = 178.0; torso_ratio = 0.6; drop = 0.42 * h; hip_frac = 0.47;
      break;
    case PostureClass::Sitting:
      knee_deg = 95.0; torso_ratio = 1.5; drop = 0.28 * h; hip_frac = 0.62;
      break;
    case PostureClass::Other:
      knee_deg = 135.0; torso_ratio = 1.1; drop = 0.32 * h; hip_frac = 0.55;
      break;
  }
  return make_geometric_skeleton(knee_deg, torso_ratio, cx,
                                 static_cast<double>(bbox.y) + hip_frac * h, drop,
                                 kJointConfidence);
}

// Body-local limb patch that carries its own texture; under small motion
// the patch texture slides, so only the patch differs between frames.
PixelRect limb_patch(const ScenarioConfig& cfg) {
  const int lw = std::max(2, cfg.occupant_w / 4);
  const int lh = std::max(2, cfg.occupant_h / 4);
  const int lx = std::min(cfg.occupant_w - lw, (cfg.occupant_w * 11) / 20);
  const int ly = std::min(cfg.occupant_h - lh, (cfg.occupant_h * 3) / 10);
  return PixelRect{std::max(0, lx), std::max(0, ly), lw, lh};
}

RawFrame render_frame(const ScenarioConfig& cfg, std::int64_t timestamp_ms,
                      const BodyState& body) {
  RawFrame frame;
  frame.timestamp_ms = timestamp_ms;
  frame.width = static_cast<std::uint16_t>(cfg.width);
  frame.height = static_cast<std::uint16_t>(cfg.height);
  frame.rgb.resize(static_cast<std::size_t>(cfg.width) * cfg.height * 3);

  const std::uint64_t bg_seed = hash_mix(cfg.seed, kBgStream);
  const std::uint64_t body_seed = hash_mix(cfg.seed, kBodyStream);
  const std::uint64_t limb_seed = hash_mix(cfg.seed, kLimbStream);
  const std::uint64_t noise_seed = hash_mix(cfg.seed, kNoiseStream);
  const PixelRect patch = limb_patch(cfg);
  const std::int64_t limb_shift =
      (body.present && body.entry->entry.motion == MotionLevel::Small)
          ? body.frame_in_entry * 2
          : 0;

  std::uint8_t* out = frame.rgb.data();
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x, out += 3) {
      double lum;
      if (body.present && body.bbox.contains(x, y)) {
        const int bx = x - body.bbox.x;
        const int by = y - body.bbox.y;
        if (patch.contains(bx, by)) {
          lum = 150.0 + 85.0 * value_noise(limb_seed, bx + limb_shift, by, 3);
        } else {
          lum = 150.0 + 85.0 * value_noise(body_seed, bx, by, 5);
        }
      } else {
        lum = 30.0 + 40.0 * value_noise(bg_seed, x, y, 8);
      }
      int v = static_cast<int>(std::llround(lum));
      if (cfg.pixel_noise > 0) {
        const std::uint64_t hn =
            hash_mix(noise_seed, static_cast<std::uint64_t>(timestamp_ms),
                     static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y));
        v += static_cast<int>(hn % (2 * cfg.pixel_noise + 1)) - cfg.pixel_noise;
      }
      const std::uint8_t byte =
          static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      out[0] = byte;
      out[1] = byte;
      out[2] = byte;
    }
  }
  return frame;
}

FrameTruth truth_at(const DayPlan& plan, std::int64_t t_local_ms,
                    const BodyState& body) {
  FrameTruth truth;
  truth.timestamp_ms = plan.midnight_utc + t_local_ms;
  truth.present = body.present;
  if (body.present) {
    truth.posture = body.entry->entry.posture;
    truth.bbox = body.bbox;
    truth.skeleton = skeleton_for(truth.posture, body.bbox);
    truth.dx = body.dx;
    truth.dy = body.dy;
  }
  return truth;
}

// Naive per-pixel diff over the clamped body bbox (full frame when absent).
// Deliberately does not share code with the motion module: this is the
// oracle the pipeline's active_pixels is checked against.
void add_pixel_truth(const ScenarioConfig& cfg, const RawFrame& prev,
                     const RawFrame& cur, FrameTruth& truth) {
  const PixelRect domain = truth.present
                               ? clamp_to_frame(truth.bbox, cfg.width, cfg.height)
                               : PixelRect{0, 0, cfg.width, cfg.height};
  truth.has_pixel_truth = true;
  truth.active_count = 0;
  int x0 = domain.right(), y0 = domain.bottom();
  int x1 = domain.x - 1, y1 = domain.y - 1;
  for (int y = domain.y; y < domain.bottom(); ++y) {
    for (int x = domain.x; x < domain.right(); ++x) {
      const std::uint8_t* a = prev.px(x, y);
      const std::uint8_t* b = cur.px(x, y);
      const int diff = std::abs(int(b[0]) - a[0]) + std::abs(int(b[1]) - a[1]) +
                       std::abs(int(b[2]) - a[2]);
      if (diff > cfg.active_threshold) {
        ++truth.active_count;
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
  }
  if (truth.active_count > 0) {
    truth.active_bbox = PixelRect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  }
}

// Iterates every grid timestamp of every planned window.
template <typename Fn>
void for_each_frame(const ScenarioConfig& cfg, const std::vector<DayPlan>& plans,
                    Fn&& fn) {
  for (const DayPlan& plan : plans) {
    for (const Window& win : plan.windows) {
      const std::int64_t j0 =
          (win.begin + cfg.frame_interval_ms - 1) / cfg.frame_interval_ms;
      const std::int64_t j1 = win.end > 0 ? (win.end - 1) / cfg.frame_interval_ms
                                          : -1;
      for (std::int64_t j = j0; j <= j1; ++j) {
        fn(plan, j * cfg.frame_interval_ms);
      }
    }
  }
}

void check_schedule(const std::vector<ScheduleEntry>& schedule,
                    const std::string& which) {
  std::vector<ScheduleEntry> sorted = schedule;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.start_ms < b.start_ms;
            });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const ScheduleEntry& e = sorted[i];
    if (e.start_ms < 0 || e.end_ms > kMsPerDay || e.start_ms >= e.end_ms) {
      throw FormatError(which + " schedule: entry times must satisfy 0 <= start < end <= 24:00");
    }
    if (e.speed_px < 0.0) {
      throw FormatError(which + " schedule: negative speed");
    }
    if (e.skip_every < 0) {
      throw FormatError(which + " schedule: negative skip_every");
    }
    if (i > 0 && sorted[i - 1].end_ms > e.start_ms) {
      throw FormatError(which + " schedule: entries overlap");
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& origin) {
  ScenarioConfig cfg;
  enum class Section { None, Scenario, Normal, Intervention };
  Section section = Section::None;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad_line(origin, line_no, "unterminated section");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "scenario") section = Section::Scenario;
      else if (name == "normal") section = Section::Normal;
      else if (name == "intervention") section = Section::Intervention;
      else bad_line(origin, line_no, "unknown section '" + name + "'");
      continue;
    }

    if (section == Section::Normal || section == Section::Intervention) {
      ScheduleEntry e = parse_schedule_line(line, origin, line_no);
      (section == Section::Normal ? cfg.schedule_normal : cfg.schedule_intervention)
          .push_back(e);
      continue;
    }
    if (section != Section::Scenario) {
      bad_line(origin, line_no, "content before any section");
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_line(origin, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) bad_line(origin, line_no, "empty value for '" + key + "'");

    if (key == "name") cfg.name = value;
    else if (key == "width") cfg.width = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "height") cfg.height = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "occupant_width") cfg.occupant_w = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "occupant_height") cfg.occupant_h = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "frame_interval_ms") cfg.frame_interval_ms = parse_i64(value, origin, line_no, key);
    else if (key == "timezone_offset_min") cfg.tz_offset_min = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "start_date") cfg.start_date = parse_date(value);
    else if (key == "phases") parse_phases_value(value, origin, line_no, cfg.day_phases);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_i64(value, origin, line_no, key));
    else if (key == "detector_noise_sigma") cfg.detector_noise_sigma = parse_f64(value, origin, line_no, key);
    else if (key == "pixel_noise") cfg.pixel_noise = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "active_threshold") cfg.active_threshold = static_cast<int>(parse_i64(value, origin, line_no, key));
    else if (key == "lead_in_ms") cfg.lead_in_ms = parse_i64(value, origin, line_no, key);
    else bad_line(origin, line_no, "unknown key '" + key + "'");
  }

  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open scenario: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

void validate_scenario(const ScenarioConfig& cfg) {
  if (cfg.width < 8 || cfg.height < 8 || cfg.width > 4096 || cfg.height > 4096) {
    throw FormatError("scenario: frame dimensions must be within [8, 4096]");
  }
  if (cfg.occupant_w < 4 || cfg.occupant_h < 4 || cfg.occupant_w > cfg.width ||
      cfg.occupant_h > cfg.height) {
    throw FormatError("scenario: occupant must be at least 4x4 and fit the frame");
  }
  if (cfg.frame_interval_ms <= 0) {
    throw FormatError("scenario: frame_interval_ms must be positive");
  }
  if (cfg.day_phases.empty()) {
    throw FormatError("scenario: phases must list at least one day");
  }
  if (cfg.detector_noise_sigma < 0.0) {
    throw FormatError("scenario: detector_noise_sigma must be >= 0");
  }
  if (cfg.pixel_noise < 0 || cfg.pixel_noise > 127) {
    throw FormatError("scenario: pixel_noise must be within [0, 127]");
  }
  if (cfg.active_threshold < 1 || cfg.active_threshold > 765) {
    throw FormatError("scenario: active_threshold must be within [1, 765]");
  }
  if (cfg.lead_in_ms < 0) {
    throw FormatError("scenario: lead_in_ms must be >= 0");
  }
  check_schedule(cfg.schedule_normal, "normal");
  check_schedule(cfg.schedule_intervention, "intervention");
}

const FrameTruth* GroundTruthLedger::find(std::int64_t timestamp_ms) const {
  const auto it = std::lower_bound(
      frames.begin(), frames.end(), timestamp_ms,
      [](const FrameTruth& f, std::int64_t ts) { return f.timestamp_ms < ts; });
  if (it == frames.end() || it->timestamp_ms != timestamp_ms) return nullptr;
  return &*it;
}

namespace {

GroundTruthLedger ledger_shell(const ScenarioConfig& cfg) {
  GroundTruthLedger ledger;
  ledger.scenario_name = cfg.name;
  ledger.seed = cfg.seed;
  ledger.width = cfg.width;
  ledger.height = cfg.height;
  ledger.frame_interval_ms = cfg.frame_interval_ms;
  ledger.tz_offset_min = cfg.tz_offset_min;
  ledger.active_threshold = cfg.active_threshold;
  return ledger;
}

DayTruth day_shell(const DayPlan& plan) {
  DayTruth day;
  day.date = plan.date;
  day.phase = plan.phase;
  return day;
}

void tally_day(DayTruth& day, const FrameTruth& truth, const ScenarioConfig& cfg,
               std::int64_t t_local_ms) {
  if (!truth.present) return;
  ++day.frames_present;
  const int hour = static_cast<int>(t_local_ms / kMsPerHour);
  day.presence_minutes[hour] += static_cast<double>(cfg.frame_interval_ms) /
                                static_cast<double>(kMsPerMinute);
  switch (truth.posture) {
    case PostureClass::Sitting: ++day.frames_sitting; break;
    case PostureClass::Standing: ++day.frames_standing; break;
    case PostureClass::Other: ++day.frames_other; break;
  }
  if (truth.has_pixel_truth) {
    ++day.frames_motion;
    if (truth.active_count == 0) ++day.frames_inactive;
    if (truth.active_bbox) {
      const PixelRect body = clamp_to_frame(truth.bbox, cfg.width, cfg.height);
      if (body.area() > 0) {
        day.sum_scale += static_cast<double>(intersect(*truth.active_bbox, body).area()) /
                         static_cast<double>(body.area());
      }
    }
    day.sum_speed += std::hypot(truth.dx, truth.dy);
  }
}

}  // namespace

GroundTruthLedger generate(const ScenarioConfig& config,
                           const std::function<void(RawFrame&&)>& sink) {
  validate_scenario(config);
  const std::vector<DayPlan> plans = make_day_plans(config);
  GroundTruthLedger ledger = ledger_shell(config);

  RawFrame prev;
  bool have_prev = false;
  const DayPlan* current_plan = nullptr;
  DayTruth day;

  for_each_frame(config, plans, [&](const DayPlan& plan, std::int64_t t_local) {
    if (current_plan != &plan) {
      if (current_plan != nullptr) ledger.days.push_back(day);
      current_plan = &plan;
      day = day_shell(plan);
    }
    const BodyState body = body_state_at(config, plan, t_local);
    RawFrame frame = render_frame(config, plan.midnight_utc + t_local, body);
    FrameTruth truth = truth_at(plan, t_local, body);
    if (have_prev) {
      add_pixel_truth(config, prev, frame, truth);
    }
    tally_day(day, truth, config, t_local);
    ledger.frames.push_back(std::move(truth));
    prev = frame;  // keep a copy: the next frame's pixel truth diffs against it
    have_prev = true;
    sink(std::move(frame));
  });
  if (current_plan != nullptr) ledger.days.push_back(day);
  return ledger;
}

GroundTruthLedger generate_fixture(const ScenarioConfig& config,
                                   const std::string& fixture_path) {
  FixtureWriter writer(fixture_path);
  GroundTruthLedger ledger =
      generate(config, [&](RawFrame&& frame) { writer.append(frame); });
  writer.close();
  return ledger;
}

GroundTruthLedger schedule_ledger(const ScenarioConfig& config) {
  validate_scenario(config);
  const std::vector<DayPlan> plans = make_day_plans(config);
  GroundTruthLedger ledger = ledger_shell(config);

  const DayPlan* current_plan = nullptr;
  DayTruth day;
  for_each_frame(config, plans, [&](const DayPlan& plan, std::int64_t t_local) {
    if (current_plan != &plan) {
      if (current_plan != nullptr) ledger.days.push_back(day);
      current_plan = &plan;
      day = day_shell(plan);
    }
    const BodyState body = body_state_at(config, plan, t_local);
    FrameTruth truth = truth_at(plan, t_local, body);
    tally_day(day, truth, config, t_local);
    ledger.frames.push_back(std::move(truth));
  });
  if (current_plan != nullptr) ledger.days.push_back(day);
  return ledger;
}

namespace {

class ScenarioStream final : public FrameStream {
 public:
  explicit ScenarioStream(ScenarioConfig config)
      : cfg_(std::move(config)), plans_(make_day_plans(cfg_)) {
    advance_to_valid();
  }

  std::optional<RawFrame> next() override {
    if (plan_i_ >= plans_.size()) return std::nullopt;
    const DayPlan& plan = plans_[plan_i_];
    const std::int64_t t_local = j_ * cfg_.frame_interval_ms;
    const BodyState body = body_state_at(cfg_, plan, t_local);
    RawFrame frame = render_frame(cfg_, plan.midnight_utc + t_local, body);
    ++j_;
    advance_to_valid();
    return frame;
  }

 private:
  // Moves (plan_i_, win_i_, j_) to the next window/day whenever the current
  // grid index ran off the end of its window.
  void advance_to_valid() {
    while (plan_i_ < plans_.size()) {
      const DayPlan& plan = plans_[plan_i_];
      if (win_i_ >= plan.windows.size()) {
        ++plan_i_;
        win_i_ = 0;
        j_ = -1;
        continue;
      }
      const Window& win = plan.windows[win_i_];
      const std::int64_t j0 =
          (win.begin + cfg_.frame_interval_ms - 1) / cfg_.frame_interval_ms;
      const std::int64_t j1 =
          win.end > 0 ? (win.end - 1) / cfg_.frame_interval_ms : -1;
      if (j_ < j0) j_ = j0;
      if (j_ <= j1) return;
      ++win_i_;
      j_ = -1;
    }
  }

  ScenarioConfig cfg_;
  std::vector<DayPlan> plans_;
  std::size_t plan_i_ = 0;
  std::size_t win_i_ = 0;
  std::int64_t j_ = -1;
};

}  // namespace

std::unique_ptr<FrameStream> open_scenario_stream(const ScenarioConfig& config) {
  validate_scenario(config);
  return std::make_unique<ScenarioStream>(config);
}

std::vector<DailySummary> oracle_summaries(const GroundTruthLedger& ledger) {
  // Hours covered by any frame at all, keyed by local date.
  std::map<LocalDate, std::set<int>> covered;
  for (const FrameTruth& f : ledger.frames) {
    const LocalBin bin = local_bin(f.timestamp_ms, ledger.tz_offset_min);
    covered[bin.date].insert(bin.hour);
  }

  std::vector<DailySummary> out;
  for (const DayTruth& day : ledger.days) {
    const auto it = covered.find(day.date);
    if (it == covered.end()) continue;  // no frames that day, nothing to compare

    DailySummary s;
    s.date = day.date;
    s.phase = day.phase;
    s.hourly_profile = day.presence_minutes;
    for (const double m : day.presence_minutes) s.appearance_minutes += m;
    s.frames_present = day.frames_present;
    s.frames_classified =
        day.frames_sitting + day.frames_standing + day.frames_other;
    s.frames_motion = day.frames_motion;
    s.frames_sitting = day.frames_sitting;
    s.frames_standing = day.frames_standing;
    s.frames_other = day.frames_other;
    s.frames_inactive = day.frames_inactive;
    s.sum_scale = day.sum_scale;
    s.sum_speed = day.sum_speed;
    s.covered_hours = static_cast<int>(it->second.size());
    out.push_back(s);
  }
  return out;
}

namespace {

using Json = nlohmann::ordered_json;

Json rect_to_json(const PixelRect& r) {
  return Json::array({r.x, r.y, r.w, r.h});
}

PixelRect rect_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw FormatError("ledger: bbox must be [x, y, w, h]");
  }
  return PixelRect{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(),
                   j[3].get<int>()};
}

}  // namespace

void write_ledger_json(const std::string& path, const GroundTruthLedger& ledger) {
  Json j;
  j["scenario_name"] = ledger.scenario_name;
  j["seed"] = ledger.seed;
  j["width"] = ledger.width;
  j["height"] = ledger.height;
  j["frame_interval_ms"] = ledger.frame_interval_ms;
  j["tz_offset_min"] = ledger.tz_offset_min;
  j["active_threshold"] = ledger.active_threshold;

  Json frames = Json::array();
  for (const FrameTruth& f : ledger.frames) {
    Json jf;
    jf["ts"] = f.timestamp_ms;
    jf["present"] = f.present;
    if (f.present) {
      jf["posture"] = posture_name(f.posture);
      jf["bbox"] = rect_to_json(f.bbox);
      Json joints = Json::array();
      for (int i = 0; i < kJointCount; ++i) {
        if (f.skeleton.joints[i]) {
          const Joint& jt = *f.skeleton.joints[i];
          joints.push_back(Json::array({i, jt.x, jt.y, jt.confidence}));
        }
      }
      jf["skeleton"] = std::move(joints);
      jf["dx"] = f.dx;
      jf["dy"] = f.dy;
    }
    if (f.has_pixel_truth) {
      Json pix;
      pix["active_count"] = f.active_count;
      if (f.active_bbox) pix["active_bbox"] = rect_to_json(*f.active_bbox);
      jf["pixel"] = std::move(pix);
    }
    frames.push_back(std::move(jf));
  }
  j["frames"] = std::move(frames);

  Json days = Json::array();
  for (const DayTruth& d : ledger.days) {
    Json jd;
    jd["date"] = format_date(d.date);
    jd["phase"] = phase_name(d.phase);
    jd["presence_minutes"] = d.presence_minutes;
    jd["frames_present"] = d.frames_present;
    jd["frames_sitting"] = d.frames_sitting;
    jd["frames_standing"] = d.frames_standing;
    jd["frames_other"] = d.frames_other;
    jd["frames_motion"] = d.frames_motion;
    jd["frames_inactive"] = d.frames_inactive;
    jd["sum_scale"] = d.sum_scale;
    jd["sum_speed"] = d.sum_speed;
    days.push_back(std::move(jd));
  }
  j["days"] = std::move(days);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << j.dump();
  out << '\n';
  if (!out) throw InputError("write failed: " + path);
}

GroundTruthLedger read_ledger_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": invalid JSON: " + e.what());
  }

  try {
    GroundTruthLedger ledger;
    ledger.scenario_name = j.at("scenario_name").get<std::string>();
    ledger.seed = j.at("seed").get<std::uint64_t>();
    ledger.width = j.at("width").get<int>();
    ledger.height = j.at("height").get<int>();
    ledger.frame_interval_ms = j.at("frame_interval_ms").get<std::int64_t>();
    ledger.tz_offset_min = j.at("tz_offset_min").get<int>();
    ledger.active_threshold = j.at("active_threshold").get<int>();

    for (const auto& jf : j.at("frames")) {
      FrameTruth f;
      f.timestamp_ms = jf.at("ts").get<std::int64_t>();
      f.present = jf.at("present").get<bool>();
      if (f.present) {
        const auto posture = parse_posture(jf.at("posture").get<std::string>());
        if (!posture) throw FormatError("ledger: unknown posture");
        f.posture = *posture;
        f.bbox = rect_from_json(jf.at("bbox"));
        for (const auto& joint : jf.at("skeleton")) {
          if (!joint.is_array() || joint.size() != 4) {
            throw FormatError("ledger: joint must be [id, x, y, confidence]");
          }
          const int id = joint[0].get<int>();
          if (id < 0 || id >= kJointCount) {
            throw FormatError("ledger: joint id out of range");
          }
          f.skeleton.set(static_cast<JointId>(id),
                         Joint{joint[1].get<double>(), joint[2].get<double>(),
                               joint[3].get<double>()});
        }
        f.dx = jf.at("dx").get<double>();
        f.dy = jf.at("dy").get<double>();
      }
      if (jf.contains("pixel")) {
        f.has_pixel_truth = true;
        f.active_count = jf["pixel"].at("active_count").get<std::int64_t>();
        if (jf["pixel"].contains("active_bbox")) {
          f.active_bbox = rect_from_json(jf["pixel"]["active_bbox"]);
        }
      }
      ledger.frames.push_back(std::move(f));
    }

    for (const auto& jd : j.at("days")) {
      DayTruth d;
      d.date = parse_date(jd.at("date").get<std::string>());
      const auto phase = parse_phase(jd.at("phase").get<std::string>());
      if (!phase) throw FormatError("ledger: unknown phase");
      d.phase = *phase;
      const auto& minutes = jd.at("presence_minutes");
      if (!minutes.is_array() || minutes.size() != 24) {
        throw FormatError("ledger: presence_minutes must have 24 bins");
      }
      for (int h = 0; h < 24; ++h) d.presence_minutes[h] = minutes[h].get<double>();
      d.frames_present = jd.at("frames_present").get<std::int64_t>();
      d.frames_sitting = jd.at("frames_sitting").get<std::int64_t>();
      d.frames_standing = jd.at("frames_standing").get<std::int64_t>();
      d.frames_other = jd.at("frames_other").get<std::int64_t>();
      d.frames_motion = jd.at("frames_motion").get<std::int64_t>();
      d.frames_inactive = jd.at("frames_inactive").get<std::int64_t>();
      d.sum_scale = jd.at("sum_scale").get<double>();
      d.sum_speed = jd.at("sum_speed").get<double>();
      ledger.days.push_back(std::move(d));
    }
    return ledger;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace ambientis
