#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambientis/aggregate.hpp"

namespace ambientis {

enum class PairingStrategy { ByIndex, ByWeekday };

const char* pairing_name(PairingStrategy s);
std::optional<PairingStrategy> parse_pairing(const std::string& name);

struct DayPair {
  const DailySummary* normal = nullptr;
  const DailySummary* intervention = nullptr;
};

struct PairingResult {
  std::vector<DayPair> pairs;
  std::vector<std::string> warnings;  // truncation / unmatched-day notes
};

// Pairs baseline and intervention days.
//   ByIndex: day k with day k, truncating to the shorter phase (warning).
//   ByWeekday: the i-th Monday with the i-th Monday and so on, dropping
//   unmatched days (warning). Pairs come back ordered by the normal day.
// Throws StatsError when either phase is empty or no pairs result.
PairingResult pair_days(std::span<const DailySummary> normal,
                        std::span<const DailySummary> intervention,
                        PairingStrategy strategy);

struct PairedSample {
  std::string feature;
  std::vector<std::pair<double, double>> pairs;  // (normal, intervention)
  PairingStrategy strategy = PairingStrategy::ByIndex;
};

inline constexpr double kSignificanceLevel = 0.05;

struct PairedComparison {
  std::string feature;
  int n_pairs = 0;
  double mean_difference = 0.0;  // intervention - normal
  double t_statistic = 0.0;
  int dof = 0;                   // n_pairs - 1
  double p_value = 1.0;          // two-tailed, in (0, 1]
  bool significant = false;      // p < 0.05
};

// Two-tailed Student-t tail probability via the regularized incomplete beta
// function: p = I_{dof/(dof + t^2)}(dof/2, 1/2), evaluated with a Lentz
// continued fraction to better than 1e-9 absolute error.
// Throws std::invalid_argument for dof < 1.
double student_t_two_tailed_p(double t, int dof);

// Paired t-test on differences d_i = intervention_i - normal_i, with the
// sample (n-1) standard deviation. Throws StatsError for n < 2
// (insufficient data) or zero-variance differences (degenerate sample).
PairedComparison paired_t_test(const PairedSample& sample);

// The seven behavioural features a comparison report covers, in report
// order. AppearanceMinutesPerHour is the per-day mean of the 24-bin hourly
// profile by default; hour-slot pairing (every (day, hour) cell as its own
// pair) is available behind the option below.
enum class BehaviouralFeature {
  StandingRatio,
  SittingRatio,
  InactivityRatio,
  MovementScale,
  MovementSpeed,
  AppearanceDuration,
  AppearanceMinutesPerHour,
};

const char* feature_name(BehaviouralFeature f);
std::vector<BehaviouralFeature> all_behavioural_features();

// Pulls one feature value out of a day; absent when the day has no defined
// value (e.g. posture ratios on a day with no presence).
std::optional<double> feature_value(const DailySummary& day, BehaviouralFeature f);

struct ComparisonOptions {
  PairingStrategy strategy = PairingStrategy::ByIndex;
  bool hour_slot_pairing = false;  // AppearanceMinutesPerHour only
};

struct ComparisonRow {
  std::string feature;
  bool testable = false;
  std::string note;  // reason when not testable
  std::optional<PairedComparison> result;
};

struct ComparisonReport {
  std::string strategy;
  std::vector<std::string> warnings;
  std::vector<ComparisonRow> rows;
};

// One row per behavioural feature. Days where a feature is undefined drop
// out of that feature's pairs; a feature left with fewer than two pairs or
// zero-variance differences is reported "not testable" instead of aborting
// the table. Throws StatsError only when pairing itself yields nothing.
ComparisonReport comparison_table(std::span<const DailySummary> normal,
                                  std::span<const DailySummary> intervention,
                                  const ComparisonOptions& options = {});

std::string report_to_json(const ComparisonReport& report);
std::string report_to_text(const ComparisonReport& report);

}  // namespace ambientis
