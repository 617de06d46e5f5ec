#include "ambientis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "ambientis/errors.hpp"

namespace ambientis {

const char* pairing_name(PairingStrategy s) {
  return s == PairingStrategy::ByIndex ? "by-index" : "by-weekday";
}

std::optional<PairingStrategy> parse_pairing(const std::string& name) {
  if (name == "by-index" || name == "index") return PairingStrategy::ByIndex;
  if (name == "by-weekday" || name == "weekday") return PairingStrategy::ByWeekday;
  return std::nullopt;
}

PairingResult pair_days(std::span<const DailySummary> normal,
                        std::span<const DailySummary> intervention,
                        PairingStrategy strategy) {
  if (normal.empty()) throw StatsError("no baseline days to pair");
  if (intervention.empty()) throw StatsError("no intervention days to pair");

  PairingResult result;
  if (strategy == PairingStrategy::ByIndex) {
    const std::size_t n = std::min(normal.size(), intervention.size());
    if (normal.size() != intervention.size()) {
      result.warnings.push_back(
          "phase lengths differ (" + std::to_string(normal.size()) +
          " baseline, " + std::to_string(intervention.size()) +
          " intervention days); truncated to " + std::to_string(n) + " pairs");
    }
    for (std::size_t i = 0; i < n; ++i) {
      result.pairs.push_back(DayPair{&normal[i], &intervention[i]});
    }
  } else {
    std::map<int, std::vector<const DailySummary*>> nrm, ivn;
    for (const DailySummary& d : normal) {
      nrm[weekday_of(d.date)].push_back(&d);
    }
    for (const DailySummary& d : intervention) {
      ivn[weekday_of(d.date)].push_back(&d);
    }
    std::size_t dropped = 0;
    for (int wd = 0; wd < 7; ++wd) {
      const auto& a = nrm[wd];
      const auto& b = ivn[wd];
      const std::size_t n = std::min(a.size(), b.size());
      for (std::size_t i = 0; i < n; ++i) {
        result.pairs.push_back(DayPair{a[i], b[i]});
      }
      dropped += a.size() + b.size() - 2 * n;
    }
    if (dropped > 0) {
      result.warnings.push_back("by-weekday pairing dropped " +
                                std::to_string(dropped) +
                                " days without a same-weekday match");
    }
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const DayPair& x, const DayPair& y) {
                return x.normal->date < y.normal->date;
              });
  }
  if (result.pairs.empty()) {
    throw StatsError("pairing produced no day pairs");
  }
  return result;
}

namespace {

// Continued-fraction evaluation of the incomplete beta function by the
// modified Lentz method. Converges for x < (a + 1) / (a + b + 2).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_tailed_p(double t, int dof) {
  if (dof < 1) {
    throw std::invalid_argument("student_t_two_tailed_p: dof must be >= 1");
  }
  const double nu = static_cast<double>(dof);
  const double x = nu / (nu + t * t);
  double p = incbeta(nu / 2.0, 0.5, x);
  if (p > 1.0) p = 1.0;
  if (p <= 0.0) p = 1e-300;  // two-tailed p lives in (0, 1]
  return p;
}

PairedComparison paired_t_test(const PairedSample& sample) {
  const std::size_t n = sample.pairs.size();
  if (n < 2) {
    throw StatsError("paired t-test needs at least two pairs");
  }
  double mean = 0.0;
  for (const auto& [nrm, ivn] : sample.pairs) mean += ivn - nrm;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (const auto& [nrm, ivn] : sample.pairs) {
    const double d = (ivn - nrm) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    throw StatsError("paired differences have zero variance");
  }

  PairedComparison cmp;
  cmp.feature = sample.feature;
  cmp.n_pairs = static_cast<int>(n);
  cmp.mean_difference = mean;
  cmp.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  cmp.dof = static_cast<int>(n) - 1;
  cmp.p_value = student_t_two_tailed_p(cmp.t_statistic, cmp.dof);
  cmp.significant = cmp.p_value < kSignificanceLevel;
  return cmp;
}

const char* feature_name(BehaviouralFeature f) {
  switch (f) {
    case BehaviouralFeature::StandingRatio: return "standing_ratio";
    case BehaviouralFeature::SittingRatio: return "sitting_ratio";
    case BehaviouralFeature::InactivityRatio: return "inactivity_ratio";
    case BehaviouralFeature::MovementScale: return "movement_scale";
    case BehaviouralFeature::MovementSpeed: return "movement_speed";
    case BehaviouralFeature::AppearanceDuration: return "appearance_duration";
    case BehaviouralFeature::AppearanceMinutesPerHour:
      return "appearance_minutes_per_hour";
  }
  return "unknown";
}

std::vector<BehaviouralFeature> all_behavioural_features() {
  return {BehaviouralFeature::StandingRatio,
          BehaviouralFeature::SittingRatio,
          BehaviouralFeature::InactivityRatio,
          BehaviouralFeature::MovementScale,
          BehaviouralFeature::MovementSpeed,
          BehaviouralFeature::AppearanceDuration,
          BehaviouralFeature::AppearanceMinutesPerHour};
}

std::optional<double> feature_value(const DailySummary& day, BehaviouralFeature f) {
  switch (f) {
    case BehaviouralFeature::StandingRatio: return day.standing_ratio();
    case BehaviouralFeature::SittingRatio: return day.sitting_ratio();
    case BehaviouralFeature::InactivityRatio: return day.inactivity_ratio();
    case BehaviouralFeature::MovementScale: return day.mean_scale();
    case BehaviouralFeature::MovementSpeed: return day.mean_speed();
    case BehaviouralFeature::AppearanceDuration: return day.appearance_minutes;
    case BehaviouralFeature::AppearanceMinutesPerHour: {
      double sum = 0.0;
      for (const double v : day.hourly_profile) sum += v;
      return sum / 24.0;
    }
  }
  return std::nullopt;
}

ComparisonReport comparison_table(std::span<const DailySummary> normal,
                                  std::span<const DailySummary> intervention,
                                  const ComparisonOptions& options) {
  const PairingResult pairing = pair_days(normal, intervention, options.strategy);

  ComparisonReport report;
  report.strategy = pairing_name(options.strategy);
  report.warnings = pairing.warnings;

  for (const BehaviouralFeature f : all_behavioural_features()) {
    ComparisonRow row;
    row.feature = feature_name(f);

    PairedSample sample;
    sample.feature = row.feature;
    sample.strategy = options.strategy;
    std::size_t undefined_days = 0;
    if (f == BehaviouralFeature::AppearanceMinutesPerHour &&
        options.hour_slot_pairing) {
      for (const DayPair& pair : pairing.pairs) {
        for (int h = 0; h < 24; ++h) {
          sample.pairs.emplace_back(pair.normal->hourly_profile[h],
                                    pair.intervention->hourly_profile[h]);
        }
      }
    } else {
      for (const DayPair& pair : pairing.pairs) {
        const auto a = feature_value(*pair.normal, f);
        const auto b = feature_value(*pair.intervention, f);
        if (a && b) {
          sample.pairs.emplace_back(*a, *b);
        } else {
          ++undefined_days;
        }
      }
    }

    try {
      row.result = paired_t_test(sample);
      row.testable = true;
      if (undefined_days > 0) {
        row.note = std::to_string(undefined_days) +
                   " pairs dropped (feature undefined on a paired day)";
      }
    } catch (const StatsError& e) {
      row.testable = false;
      row.note = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["strategy"] = report.strategy;
  j["significance_level"] = kSignificanceLevel;
  j["warnings"] = report.warnings;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ComparisonRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["feature"] = row.feature;
    r["testable"] = row.testable;
    if (!row.note.empty()) r["note"] = row.note;
    if (row.result) {
      r["n_pairs"] = row.result->n_pairs;
      r["mean_difference"] = row.result->mean_difference;
      r["t_statistic"] = row.result->t_statistic;
      r["dof"] = row.result->dof;
      r["p_value"] = row.result->p_value;
      r["significant"] = row.result->significant;
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2);
}

std::string report_to_text(const ComparisonReport& report) {
  std::string out = "pairing: " + report.strategy + "\n";
  for (const std::string& w : report.warnings) {
    out += "warning: " + w + "\n";
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %6s %12s %10s %5s %10s  %s\n", "feature",
                "n", "mean_diff", "t", "dof", "p", "sig");
  out += line;
  for (const ComparisonRow& row : report.rows) {
    if (row.result) {
      const PairedComparison& c = *row.result;
      std::snprintf(line, sizeof line, "%-28s %6d %12.5f %10.4f %5d %10.4g  %s\n",
                    row.feature.c_str(), c.n_pairs, c.mean_difference,
                    c.t_statistic, c.dof, c.p_value, c.significant ? "*" : "");
      out += line;
      if (!row.note.empty()) {
        out += "    note: " + row.note + "\n";
      }
    } else {
      std::snprintf(line, sizeof line, "%-28s %6s  not testable: %s\n",
                    row.feature.c_str(), "-", row.note.c_str());
      out += line;
    }
  }
  return out;
}

}  // namespace ambientis
