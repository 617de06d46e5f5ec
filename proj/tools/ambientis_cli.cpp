// ambientis: synthetic-scenario simulation, feature extraction, aggregation
// and phase comparison behind one binary. Every artifact it writes is
// feature-level; frames stay in memory unless simulate/report is explicitly
// asked for a fixture.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ambientis/aggregate.hpp"
#include "ambientis/errors.hpp"
#include "ambientis/features.hpp"
#include "ambientis/fixture.hpp"
#include "ambientis/pipeline.hpp"
#include "ambientis/privacy.hpp"
#include "ambientis/simulator.hpp"
#include "ambientis/stats.hpp"

namespace {

using namespace ambientis;

namespace fs = std::filesystem;

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir);
}

PhaseMap scenario_phases(const ScenarioConfig& cfg) {
  PhaseMap phases;
  const std::int64_t first = days_from_epoch(cfg.start_date);
  for (std::size_t k = 0; k < cfg.day_phases.size(); ++k) {
    phases.by_date[date_from_epoch_days(first + static_cast<std::int64_t>(k))] =
        cfg.day_phases[k];
  }
  return phases;
}

// "normal:2024-06-03:2024-06-10,intervention:2024-06-11:2024-06-18" with an
// optional "default:PHASE" clause.
PhaseMap parse_phase_spec(const std::string& spec) {
  PhaseMap phases;
  std::stringstream ss(spec);
  std::string clause;
  while (std::getline(ss, clause, ',')) {
    std::vector<std::string> parts;
    std::stringstream cs(clause);
    std::string part;
    while (std::getline(cs, part, ':')) parts.push_back(part);
    if (parts.size() == 2 && parts[0] == "default") {
      const auto phase = parse_phase(parts[1]);
      if (!phase) throw InputError("unknown phase '" + parts[1] + "' in --phases");
      phases.default_phase = *phase;
      continue;
    }
    if (parts.size() != 3) {
      throw InputError("--phases clause must be PHASE:FIRST:LAST or default:PHASE, got '" +
                       clause + "'");
    }
    const auto phase = parse_phase(parts[0]);
    if (!phase) throw InputError("unknown phase '" + parts[0] + "' in --phases");
    phases.add_range(parse_date(parts[1]), parse_date(parts[2]), *phase);
  }
  if (phases.by_date.empty() && !phases.default_phase) {
    throw InputError("--phases mapped no dates");
  }
  return phases;
}

PipelineConfig scenario_pipeline_config(const ScenarioConfig& cfg) {
  PipelineConfig pc;
  pc.pose_detector = "scenario-pose";
  pc.object_detector = "scenario-object";
  pc.active_threshold = cfg.active_threshold;
  pc.tz_offset_min = cfg.tz_offset_min;
  pc.detector_noise_sigma = cfg.detector_noise_sigma;
  pc.detector_noise_seed = cfg.seed;
  return pc;
}

struct SplitDays {
  std::vector<DailySummary> normal;
  std::vector<DailySummary> intervention;
};

SplitDays split_by_phase(const std::vector<DailySummary>& days) {
  SplitDays split;
  for (const DailySummary& d : days) {
    (d.phase == Phase::Normal ? split.normal : split.intervention).push_back(d);
  }
  return split;
}

int profile_argmax(const std::array<double, 24>& profile) {
  int best = 0;
  for (int h = 1; h < 24; ++h) {
    if (profile[h] > profile[best]) best = h;
  }
  return best;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

// ----------------------------------------------------------- subcommands

struct SimulateArgs {
  std::string scenario;
  std::string out;
  bool fixture = false;
};

int cmd_simulate(const SimulateArgs& args) {
  const ScenarioConfig cfg = parse_scenario_file(args.scenario);
  ensure_dir(args.out);
  GroundTruthLedger ledger;
  if (args.fixture) {
    const std::string fixture_path = out_path(args.out, cfg.name + ".ambf");
    ledger = generate_fixture(cfg, fixture_path);
    std::cout << "wrote " << fixture_path << " (" << ledger.frames.size()
              << " frames)\n";
  } else {
    ledger = schedule_ledger(cfg);
  }
  const std::string ledger_path = out_path(args.out, cfg.name + ".ledger.json");
  write_ledger_json(ledger_path, ledger);
  std::cout << "wrote " << ledger_path << " (" << ledger.frames.size()
            << " frames, " << ledger.days.size() << " days)\n";
  return 0;
}

struct RunArgs {
  std::string scenario;
  std::string fixture;
  std::string config;
  std::string ledger;
  std::string out;
  int threshold = 0;           // 0: keep source default
  std::string speed_domain;
  int tz_offset_min = 0;
  bool tz_set = false;
};

int cmd_run(const RunArgs& args) {
  ensure_dir(args.out);
  std::vector<FrameFeatures> features;
  std::int64_t interval_ms = 0;
  int tz = 0;

  if (!args.scenario.empty()) {
    if (!args.config.empty()) {
      throw InputError("--config applies to recorded fixtures; scenarios carry "
                       "their own pipeline settings");
    }
    const ScenarioConfig cfg = parse_scenario_file(args.scenario);
    PipelineConfig pc = scenario_pipeline_config(cfg);
    if (args.threshold > 0) pc.active_threshold = args.threshold;
    if (!args.speed_domain.empty()) {
      const auto domain = parse_speed_domain(args.speed_domain);
      if (!domain) throw InputError("unknown speed domain '" + args.speed_domain + "'");
      pc.speed_domain = *domain;
    }
    const GroundTruthLedger ledger = schedule_ledger(cfg);
    const auto stream = open_scenario_stream(cfg);
    features = run_pipeline(*stream, pc, &ledger);
    interval_ms = cfg.frame_interval_ms;
    tz = cfg.tz_offset_min;
  } else {
    PipelineConfig pc;
    if (!args.config.empty()) pc = parse_pipeline_config(args.config);
    if (args.threshold > 0) pc.active_threshold = args.threshold;
    if (!args.speed_domain.empty()) {
      const auto domain = parse_speed_domain(args.speed_domain);
      if (!domain) throw InputError("unknown speed domain '" + args.speed_domain + "'");
      pc.speed_domain = *domain;
    }
    if (!args.ledger.empty()) pc.ledger_path = args.ledger;
    if (args.tz_set) pc.tz_offset_min = args.tz_offset_min;
    FixtureReader stream(args.fixture);
    features = run_pipeline(stream, pc);
    tz = pc.tz_offset_min;
  }

  const std::string features_path = out_path(args.out, "features.jsonl");
  write_features_jsonl(features_path, features);
  std::cout << "wrote " << features_path << " (" << features.size()
            << " frames)\n";
  if (interval_ms > 0) {
    std::cout << "frame interval: " << interval_ms << " ms, timezone offset: "
              << tz << " min\n";
  }
  return 0;
}

struct AggregateArgs {
  std::string features;
  std::string out;
  std::int64_t interval_ms = 0;
  int tz_offset_min = 0;
  std::string phases;
  int min_covered_hours = 0;
};

int cmd_aggregate(const AggregateArgs& args) {
  if (args.interval_ms <= 0) throw InputError("--interval-ms must be positive");
  ensure_dir(args.out);
  const std::vector<FrameFeatures> features = read_features_jsonl(args.features);
  const std::vector<HourlyAggregate> hours =
      aggregate_hours(features, args.interval_ms, args.tz_offset_min);
  const PhaseMap phases = parse_phase_spec(args.phases);
  const std::vector<DailySummary> days =
      aggregate_days(hours, phases, args.min_covered_hours);

  const std::string hourly_path = out_path(args.out, "hourly.csv");
  const std::string daily_path = out_path(args.out, "daily.csv");
  write_hourly_csv(hourly_path, hours);
  write_daily_csv(daily_path, days);
  std::cout << "wrote " << hourly_path << " (" << hours.size() << " hours)\n";
  std::cout << "wrote " << daily_path << " (" << days.size() << " days)\n";
  return 0;
}

struct CompareArgs {
  std::string daily;
  std::string out;
  std::string strategy = "by-index";
  bool hour_slot_pairing = false;
};

int cmd_compare(const CompareArgs& args) {
  const std::vector<DailySummary> days = read_daily_csv(args.daily);
  const SplitDays split = split_by_phase(days);
  ComparisonOptions options;
  const auto strategy = parse_pairing(args.strategy);
  if (!strategy) throw InputError("unknown pairing strategy '" + args.strategy + "'");
  options.strategy = *strategy;
  options.hour_slot_pairing = args.hour_slot_pairing;

  const ComparisonReport report =
      comparison_table(split.normal, split.intervention, options);
  const std::string text = report_to_text(report);
  std::cout << text;
  if (!args.out.empty()) {
    ensure_dir(args.out);
    write_text(out_path(args.out, "report.json"), report_to_json(report) + "\n");
    write_text(out_path(args.out, "report.txt"), text);
    std::cout << "wrote " << out_path(args.out, "report.json") << "\n";
  }
  return 0;
}

struct ReportArgs {
  std::string scenario;
  std::string out;
  std::string strategy = "by-index";
  std::string band;
  std::string speed_domain;
  int threshold = 0;
  int min_covered_hours = 0;
  bool hour_slot_pairing = false;
  bool keep_frames = false;
};

int cmd_report(const ReportArgs& args) {
  const ScenarioConfig cfg = parse_scenario_file(args.scenario);
  ensure_dir(args.out);

  PipelineConfig pc = scenario_pipeline_config(cfg);
  if (args.threshold > 0) pc.active_threshold = args.threshold;
  if (!args.speed_domain.empty()) {
    const auto domain = parse_speed_domain(args.speed_domain);
    if (!domain) throw InputError("unknown speed domain '" + args.speed_domain + "'");
    pc.speed_domain = *domain;
  }

  const GroundTruthLedger ledger = schedule_ledger(cfg);
  const auto stream = open_scenario_stream(cfg);
  const std::vector<FrameFeatures> features = run_pipeline(*stream, pc, &ledger);
  write_features_jsonl(out_path(args.out, "features.jsonl"), features);

  const std::vector<HourlyAggregate> hours =
      aggregate_hours(features, cfg.frame_interval_ms, cfg.tz_offset_min);
  const std::vector<DailySummary> days =
      aggregate_days(hours, scenario_phases(cfg), args.min_covered_hours);
  write_hourly_csv(out_path(args.out, "hourly.csv"), hours);
  write_daily_csv(out_path(args.out, "daily.csv"), days);

  const SplitDays split = split_by_phase(days);
  ComparisonOptions options;
  const auto strategy = parse_pairing(args.strategy);
  if (!strategy) throw InputError("unknown pairing strategy '" + args.strategy + "'");
  options.strategy = *strategy;
  options.hour_slot_pairing = args.hour_slot_pairing;
  const ComparisonReport report =
      comparison_table(split.normal, split.intervention, options);
  write_text(out_path(args.out, "report.json"), report_to_json(report) + "\n");
  const std::string text = report_to_text(report);
  write_text(out_path(args.out, "report.txt"), text);
  std::cout << text;

  const std::array<double, 24> profile_normal = mean_hourly_profile(split.normal);
  const std::array<double, 24> profile_intervention =
      mean_hourly_profile(split.intervention);
  {
    std::string csv = "hour,normal_minutes,intervention_minutes\n";
    for (int h = 0; h < 24; ++h) {
      char line[96];
      std::snprintf(line, sizeof line, "%d,%.10g,%.10g\n", h, profile_normal[h],
                    profile_intervention[h]);
      csv += line;
    }
    write_text(out_path(args.out, "profiles.csv"), csv);
  }

  nlohmann::ordered_json summary;
  summary["scenario"] = cfg.name;
  summary["days_normal"] = split.normal.size();
  summary["days_intervention"] = split.intervention.size();
  summary["profile_argmax"] = {{"normal", profile_argmax(profile_normal)},
                               {"intervention", profile_argmax(profile_intervention)}};
  if (!args.band.empty()) {
    int first = 0, last = 0;
    if (std::sscanf(args.band.c_str(), "%d-%d", &first, &last) != 2) {
      throw InputError("--band must look like 0-5");
    }
    const double change = band_change(profile_normal, profile_intervention, first, last);
    summary["band"] = {{"first_hour", first},
                       {"last_hour", last},
                       {"change_percent", change}};
    std::printf("band %02d:00-%02d:59 presence change: %.1f%%\n", first, last,
                change);
  }
  write_text(out_path(args.out, "summary.json"), summary.dump(2) + "\n");

  if (args.keep_frames) {
    generate_fixture(cfg, out_path(args.out, cfg.name + ".ambf"));
    std::cout << "kept raw frames: " << out_path(args.out, cfg.name + ".ambf")
              << "\n";
  }
  std::cout << "report written to " << args.out << "\n";
  return 0;
}

struct ScanArgs {
  std::string dir;
  int width = 0;
  int height = 0;
  std::int64_t budget = 0;
};

int cmd_scan(const ScanArgs& args) {
  std::size_t budget = static_cast<std::size_t>(args.budget);
  if (budget == 0) {
    if (args.width <= 0 || args.height <= 0) {
      throw InputError("scan needs --budget or both --width and --height");
    }
    budget = static_cast<std::size_t>(args.width) * static_cast<std::size_t>(args.height);
  }
  const PrivacyScanResult result = scan_artifacts(args.dir, budget);
  std::cout << "scanned " << result.files_scanned << " files at pixel budget "
            << budget << "\n";
  for (const PrivacyFinding& f : result.findings) {
    std::cout << "finding: " << f.file << ": " << f.what << "\n";
  }
  if (!result.clean()) {
    std::cout << result.findings.size() << " finding(s)\n";
    return 1;
  }
  std::cout << "clean\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behavioural monitoring pipeline: simulate, extract, aggregate, compare"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "render a scenario into a ground-truth ledger (and optionally a fixture)");
  simulate->add_option("--scenario", sim.scenario, "scenario file")->required();
  simulate->add_option("--out", sim.out, "output directory")->required();
  simulate->add_flag("--fixture", sim.fixture,
                     "also write the rendered frames as a .ambf fixture");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "extract per-frame features");
  auto* run_scn = run_cmd->add_option("--scenario", run.scenario, "scenario source");
  auto* run_fix = run_cmd->add_option("--fixture", run.fixture, "recorded fixture source");
  run_scn->excludes(run_fix);
  run_cmd->add_option("--config", run.config, "pipeline config file (fixture source)");
  run_cmd->add_option("--ledger", run.ledger, "ground-truth ledger for scenario detectors");
  run_cmd->add_option("--out", run.out, "output directory")->required();
  run_cmd->add_option("--threshold", run.threshold, "active-pixel threshold override");
  run_cmd->add_option("--speed-domain", run.speed_domain, "bbox or active");
  run_cmd->add_option("--tz", run.tz_offset_min, "timezone offset minutes (fixture source)")
      ->each([&run](const std::string&) { run.tz_set = true; });

  AggregateArgs agg;
  CLI::App* aggregate = app.add_subcommand("aggregate", "bin features into hourly and daily CSVs");
  aggregate->add_option("--features", agg.features, "features.jsonl")->required();
  aggregate->add_option("--out", agg.out, "output directory")->required();
  aggregate->add_option("--interval-ms", agg.interval_ms, "frame interval in ms")->required();
  aggregate->add_option("--tz", agg.tz_offset_min, "timezone offset minutes");
  aggregate->add_option("--phases", agg.phases,
                        "PHASE:FIRST:LAST[,...] date ranges, plus optional default:PHASE")
      ->required();
  aggregate->add_option("--min-covered-hours", agg.min_covered_hours,
                        "drop days monitored for fewer hours");

  CompareArgs cmp;
  CLI::App* compare = app.add_subcommand("compare", "paired t-tests between the phases of a daily CSV");
  compare->add_option("--daily", cmp.daily, "daily.csv")->required();
  compare->add_option("--out", cmp.out, "output directory for report.json/report.txt");
  compare->add_option("--strategy", cmp.strategy, "by-index or by-weekday");
  compare->add_flag("--hour-slot-pairing", cmp.hour_slot_pairing,
                    "pair appearance minutes per (day, hour) cell");

  ReportArgs rep;
  CLI::App* report = app.add_subcommand("report", "full scenario run: features, CSVs, comparison, profiles");
  report->add_option("--scenario", rep.scenario, "scenario file")->required();
  report->add_option("--out", rep.out, "output directory")->required();
  report->add_option("--strategy", rep.strategy, "by-index or by-weekday");
  report->add_option("--band", rep.band, "inclusive hour band for presence change, e.g. 0-5");
  report->add_option("--speed-domain", rep.speed_domain, "bbox or active");
  report->add_option("--threshold", rep.threshold, "active-pixel threshold override");
  report->add_option("--min-covered-hours", rep.min_covered_hours,
                     "drop days monitored for fewer hours");
  report->add_flag("--hour-slot-pairing", rep.hour_slot_pairing,
                   "pair appearance minutes per (day, hour) cell");
  report->add_flag("--keep-frames", rep.keep_frames,
                   "also persist rendered frames as a fixture (privacy scan will flag it)");

  ScanArgs scan;
  CLI::App* scan_cmd = app.add_subcommand("scan", "privacy-scan persisted artifacts for pixel payloads");
  scan_cmd->add_option("--dir", scan.dir, "directory to scan")->required();
  scan_cmd->add_option("--width", scan.width, "frame width for the pixel budget");
  scan_cmd->add_option("--height", scan.height, "frame height for the pixel budget");
  scan_cmd->add_option("--budget", scan.budget, "explicit pixel budget in bytes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (run_cmd->parsed()) return cmd_run(run);
    if (aggregate->parsed()) return cmd_aggregate(agg);
    if (compare->parsed()) return cmd_compare(cmp);
    if (report->parsed()) return cmd_report(rep);
    if (scan_cmd->parsed()) return cmd_scan(scan);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 3;
  } catch (const StatsError& e) {
    std::cerr << "stats error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
