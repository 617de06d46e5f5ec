#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "ambientis/errors.hpp"
#include "ambientis/rng.hpp"
#include "ambientis/stats.hpp"

using namespace ambientis;

namespace {

DailySummary make_day(int day_of_june, Phase phase, double minutes) {
  DailySummary d;
  d.date = LocalDate{2024, 6, day_of_june};
  d.phase = phase;
  d.appearance_minutes = minutes;
  d.hourly_profile[9] = minutes;
  d.frames_present = 100;
  d.frames_classified = 100;
  d.frames_motion = 100;
  d.frames_sitting = 60;
  d.frames_standing = 40;
  d.frames_inactive = 10;
  d.sum_scale = 20.0;
  d.sum_speed = 50.0;
  d.covered_hours = 24;
  return d;
}

PairedComparison run_rows(const std::vector<double>& normal,
                          const std::vector<double>& intervention) {
  PairedSample sample;
  sample.feature = "test";
  for (std::size_t i = 0; i < normal.size(); ++i) {
    sample.pairs.emplace_back(normal[i], intervention[i]);
  }
  return paired_t_test(sample);
}

}  // namespace

TEST_CASE("student t p-value matches closed forms") {
  // dof 1 is Cauchy: p = 1 - (2/pi) atan(t); dof 2: p = 1 - t/sqrt(t^2+2).
  for (double t = 0.0; t <= 13.0; t += 0.37) {
    const double cauchy = 1.0 - 2.0 / 3.14159265358979323846 * std::atan(t);
    CHECK(student_t_two_tailed_p(t, 1) == doctest::Approx(cauchy).epsilon(1e-10));
    const double two = 1.0 - t / std::sqrt(t * t + 2.0);
    CHECK(student_t_two_tailed_p(t, 2) == doctest::Approx(two).epsilon(1e-10));
  }
}

TEST_CASE("student t p-value basics") {
  CHECK(student_t_two_tailed_p(0.0, 5) == doctest::Approx(1.0));
  CHECK(student_t_two_tailed_p(-2.5, 7) ==
        doctest::Approx(student_t_two_tailed_p(2.5, 7)).epsilon(1e-14));
  double prev = 1.1;
  for (double t = 0.0; t < 30.0; t += 0.5) {
    const double p = student_t_two_tailed_p(t, 9);
    CHECK(p <= prev);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
  CHECK(student_t_two_tailed_p(1e6, 3) > 0.0);  // clamped, never exactly 0
  CHECK_THROWS_AS((void)student_t_two_tailed_p(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)student_t_two_tailed_p(1.0, -3), std::invalid_argument);
}

TEST_CASE("paired t-test on the canonical differences") {
  const PairedComparison r = run_rows({2.0, 4.0, 6.0}, {3.0, 6.0, 9.0});
  // differences 1, 2, 3: mean 2, sd 1, t = 2*sqrt(3)
  CHECK(r.n_pairs == 3);
  CHECK(r.dof == 2);
  CHECK(r.mean_difference == doctest::Approx(2.0));
  CHECK(r.t_statistic == doctest::Approx(3.4641016151).epsilon(1e-9));
  CHECK(r.p_value == doctest::Approx(0.0741799).epsilon(1e-5));
  CHECK_FALSE(r.significant);
}

TEST_CASE("paired t-test rejects degenerate samples") {
  CHECK_THROWS_AS((void)run_rows({1.0}, {2.0}), StatsError);
  CHECK_THROWS_AS((void)run_rows({}, {}), StatsError);
  // constant differences have zero variance
  CHECK_THROWS_AS((void)run_rows({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0}), StatsError);
}

TEST_CASE("paired t-test invariances") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = int(rng.next_int(3, 12));
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.next_real(-5.0, 5.0);
      b[i] = a[i] + rng.next_real(-2.0, 2.0);
    }
    const PairedComparison fwd = run_rows(a, b);
    const PairedComparison rev = run_rows(b, a);
    CHECK(rev.t_statistic == doctest::Approx(-fwd.t_statistic).epsilon(1e-12));
    CHECK(rev.p_value == doctest::Approx(fwd.p_value).epsilon(1e-12));

    const double shift = rng.next_real(-10.0, 10.0);
    const double scale = rng.next_real(0.1, 10.0);
    std::vector<double> a2(a), b2(b);
    for (int i = 0; i < n; ++i) {
      a2[i] = scale * (a[i] + shift);
      b2[i] = scale * (b[i] + shift);
    }
    const PairedComparison tr = run_rows(a2, b2);
    CHECK(tr.t_statistic == doctest::Approx(fwd.t_statistic).epsilon(1e-9));
    CHECK(tr.p_value == doctest::Approx(fwd.p_value).epsilon(1e-9));
  }
}

TEST_CASE("pairing by index truncates with a warning") {
  std::vector<DailySummary> normal = {make_day(3, Phase::Normal, 10),
                                      make_day(4, Phase::Normal, 12),
                                      make_day(5, Phase::Normal, 14)};
  std::vector<DailySummary> intervention = {make_day(11, Phase::Intervention, 9),
                                            make_day(12, Phase::Intervention, 8)};
  const PairingResult r = pair_days(normal, intervention, PairingStrategy::ByIndex);
  CHECK(r.pairs.size() == 2);
  CHECK(r.pairs[0].normal->date.day == 3);
  CHECK(r.pairs[0].intervention->date.day == 11);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("truncated") != std::string::npos);

  CHECK_THROWS_AS((void)pair_days({}, intervention, PairingStrategy::ByIndex),
                  StatsError);
}

TEST_CASE("pairing by weekday matches weekdays and drops the rest") {
  // 2024-06-03 and 2024-06-10 are Mondays, 2024-06-04 a Tuesday.
  std::vector<DailySummary> normal = {make_day(3, Phase::Normal, 10),
                                      make_day(4, Phase::Normal, 11),
                                      make_day(10, Phase::Normal, 12)};
  // 2024-06-17 and 2024-06-24 Mondays, 2024-06-19 a Wednesday.
  std::vector<DailySummary> intervention = {
      make_day(17, Phase::Intervention, 9), make_day(19, Phase::Intervention, 8),
      make_day(24, Phase::Intervention, 7)};
  const PairingResult r = pair_days(normal, intervention, PairingStrategy::ByWeekday);
  REQUIRE(r.pairs.size() == 2);
  CHECK(r.pairs[0].normal->date.day == 3);
  CHECK(r.pairs[0].intervention->date.day == 17);
  CHECK(r.pairs[1].normal->date.day == 10);
  CHECK(r.pairs[1].intervention->date.day == 24);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("2 days") != std::string::npos);
}

TEST_CASE("feature values and their undefined cases") {
  DailySummary d = make_day(3, Phase::Normal, 30.0);
  CHECK(*feature_value(d, BehaviouralFeature::SittingRatio) == doctest::Approx(0.6));
  CHECK(*feature_value(d, BehaviouralFeature::StandingRatio) == doctest::Approx(0.4));
  CHECK(*feature_value(d, BehaviouralFeature::InactivityRatio) == doctest::Approx(0.1));
  CHECK(*feature_value(d, BehaviouralFeature::MovementScale) == doctest::Approx(0.2));
  CHECK(*feature_value(d, BehaviouralFeature::MovementSpeed) == doctest::Approx(0.5));
  CHECK(*feature_value(d, BehaviouralFeature::AppearanceDuration) == doctest::Approx(30.0));
  CHECK(*feature_value(d, BehaviouralFeature::AppearanceMinutesPerHour) ==
        doctest::Approx(30.0 / 24.0));

  DailySummary empty;
  empty.phase = Phase::Normal;
  CHECK_FALSE(feature_value(empty, BehaviouralFeature::SittingRatio).has_value());
  CHECK_FALSE(feature_value(empty, BehaviouralFeature::InactivityRatio).has_value());
  CHECK(*feature_value(empty, BehaviouralFeature::AppearanceDuration) == 0.0);
}

TEST_CASE("comparison table covers every feature and drops undefined pairs") {
  Rng rng(7);
  std::vector<DailySummary> normal, intervention;
  for (int i = 0; i < 6; ++i) {
    DailySummary n = make_day(3 + i, Phase::Normal, 30.0 + rng.next_real(0, 5));
    DailySummary v = make_day(11 + i, Phase::Intervention, 20.0 + rng.next_real(0, 5));
    n.frames_sitting = 50 + i;
    n.frames_standing = 50 - i;
    v.frames_sitting = 70 + 2 * i;
    v.frames_standing = 30 - 2 * i;
    v.frames_inactive = 20 + i;
    v.sum_scale = 10.0 + i;
    v.sum_speed = 80.0 + 3 * i;
    normal.push_back(n);
    intervention.push_back(v);
  }
  // day 4 never got motion features: scale/speed/inactivity undefined there
  normal[1].frames_motion = 0;
  normal[1].frames_inactive = 0;
  normal[1].sum_scale = 0.0;
  normal[1].sum_speed = 0.0;

  const ComparisonReport report = comparison_table(normal, intervention);
  CHECK(report.rows.size() == all_behavioural_features().size());
  for (const ComparisonRow& row : report.rows) {
    INFO(row.feature);
    CHECK(row.testable);
    REQUIRE(row.result.has_value());
    if (row.feature == "inactivity_ratio" || row.feature == "movement_scale" ||
        row.feature == "movement_speed") {
      CHECK(row.result->n_pairs == 5);
      CHECK(row.note.find("dropped") != std::string::npos);
    } else {
      CHECK(row.result->n_pairs == 6);
      CHECK(row.result->dof == 5);
    }
  }
}

TEST_CASE("hour-slot pairing widens the appearance-minutes sample") {
  std::vector<DailySummary> normal, intervention;
  Rng rng(19);
  for (int i = 0; i < 4; ++i) {
    DailySummary n = make_day(3 + i, Phase::Normal, 0.0);
    DailySummary v = make_day(11 + i, Phase::Intervention, 0.0);
    for (int h = 0; h < 24; ++h) {
      n.hourly_profile[h] = rng.next_real(0, 10);
      v.hourly_profile[h] = rng.next_real(0, 10);
    }
    normal.push_back(n);
    intervention.push_back(v);
  }
  ComparisonOptions options;
  options.hour_slot_pairing = true;
  const ComparisonReport report = comparison_table(normal, intervention, options);
  for (const ComparisonRow& row : report.rows) {
    if (row.feature != "appearance_minutes_per_hour") continue;
    REQUIRE(row.result.has_value());
    CHECK(row.result->n_pairs == 4 * 24);
    CHECK(row.result->dof == 4 * 24 - 1);
  }
}

TEST_CASE("untestable rows carry the reason instead of throwing") {
  // single pair: dof 0
  std::vector<DailySummary> normal = {make_day(3, Phase::Normal, 10)};
  std::vector<DailySummary> intervention = {make_day(11, Phase::Intervention, 9)};
  const ComparisonReport report = comparison_table(normal, intervention);
  for (const ComparisonRow& row : report.rows) {
    CHECK_FALSE(row.testable);
    CHECK_FALSE(row.note.empty());
    CHECK_FALSE(row.result.has_value());
  }
}

TEST_CASE("report serializes to json and text") {
  std::vector<DailySummary> normal, intervention;
  Rng rng(23);
  for (int i = 0; i < 5; ++i) {
    normal.push_back(make_day(3 + i, Phase::Normal, 30.0 + rng.next_real(0, 4)));
    intervention.push_back(make_day(11 + i, Phase::Intervention, 20.0 + rng.next_real(0, 4)));
  }
  const ComparisonReport report = comparison_table(normal, intervention);

  const nlohmann::json j = nlohmann::json::parse(report_to_json(report));
  CHECK(j.at("strategy") == "by-index");
  CHECK(j.at("significance_level") == doctest::Approx(0.05));
  CHECK(j.at("rows").size() == report.rows.size());
  CHECK(j.at("rows")[0].contains("feature"));

  const std::string text = report_to_text(report);
  CHECK(text.find("appearance_duration") != std::string::npos);
  CHECK(text.find("mean_diff") != std::string::npos);
}

TEST_CASE("names parse both ways") {
  CHECK(parse_pairing("by-weekday") == PairingStrategy::ByWeekday);
  CHECK(parse_pairing("index") == PairingStrategy::ByIndex);
  CHECK_FALSE(parse_pairing("nope").has_value());
  CHECK(std::string(pairing_name(PairingStrategy::ByIndex)) == "by-index");
  for (const BehaviouralFeature f : all_behavioural_features()) {
    CHECK_FALSE(std::string(feature_name(f)).empty());
  }
}
