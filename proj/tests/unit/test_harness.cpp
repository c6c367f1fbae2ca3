#include <gtest/gtest.h>

#include <cmath>

#include "locrad/error.hpp"
#include "locrad/harness.hpp"

using namespace locrad;

namespace {

TrialConfig quick(std::string id, std::size_t trials = 40) {
  TrialConfig c;
  c.claim_id = std::move(id);
  c.num_trials = trials;
  c.seed = 5;
  c.data_draws = 32;
  c.expected_sigma_draws = 16;
  c.sigma_draws = 64;
  c.fit_scaling = false;
  return c;
}

Instance custom(std::vector<std::vector<double>> rows, double lo, double hi,
                std::vector<double> targets = {}) {
  const std::size_t N = rows.front().size();
  return Instance{"custom", DiscreteDistribution::uniform(N), TabulatedClass::from_rows(rows, lo, hi),
                  std::move(targets)};
}

void expect_consistent(const TrialReport& r) {
  EXPECT_LE(r.violations, r.trials);
  if (r.trials > 0) {
    EXPECT_DOUBLE_EQ(r.violation_rate, static_cast<double>(r.violations) / r.trials);
    EXPECT_EQ(r.margins.size(), r.trials);
  }
  if (r.violations == 0)
    for (double m : r.margins) EXPECT_GE(m, 0.0);
  EXPECT_EQ(r.within_slack, r.violation_rate <= r.slack_limit);
}

bool same(const TrialReport& a, const TrialReport& b) {
  return a.violations == b.violations && a.margins == b.margins && a.details == b.details &&
         a.mean_margin == b.mean_margin;
}

}  // namespace

TEST(Harness, SlackFormula) {
  EXPECT_DOUBLE_EQ(binomial_slack_limit(0.1, 100), 0.1 + 3.0 * std::sqrt(0.09 / 100.0) + 0.1);
  EXPECT_DOUBLE_EQ(binomial_slack_limit(4.0, 10), 1.0 + 1.0);
  EXPECT_THROW(binomial_slack_limit(0.1, 0), PreconditionError);
}

TEST(Harness, ConfigIsValidated) {
  auto c = quick("4.1");
  c.num_trials = 0;
  EXPECT_THROW(validate(c), ConfigurationError);
  c = quick("4.1");
  c.K = 1.0;
  EXPECT_THROW(validate(c), ConfigurationError);
  EXPECT_THROW(validate(quick("9.9")), ConfigurationError);
  EXPECT_NO_THROW(default_instance("3.6"));
  for (const auto& id : known_claim_ids()) EXPECT_GT(default_sample_size(id), 0u);
}

TEST(Harness, ReportsAreReproducible) {
  for (const char* id : {"2.2", "3.3-1", "4.1", "5.4"}) {
    const auto a = validate(quick(id, 20));
    const auto b = validate(quick(id, 20));
    EXPECT_TRUE(same(a, b)) << id;
    expect_consistent(a);
    auto c = quick(id, 20);
    c.seed = 6;
    EXPECT_FALSE(validate(c).margins == a.margins) << id;
  }
}

TEST(Harness, ZeroVarianceContainmentNeverFails) {
  auto c = quick("2.2", 100);
  c.instance = custom({std::vector<double>(16, 0.5), std::vector<double>(16, -0.3)}, -1, 1);
  const auto r = validate(c);
  ASSERT_FALSE(r.skipped);
  EXPECT_EQ(r.violations, 0u);
  expect_consistent(r);
}

TEST(Harness, DoublingRadiusDoesNotAddViolations) {
  for (const char* id : {"2.2", "3.6"}) {
    auto c = quick(id, 200);
    const auto base = validate(c);
    c.radius_scale = 2.0;
    const auto wide = validate(c);
    ASSERT_FALSE(base.skipped);
    EXPECT_LE(wide.violations, base.violations) << id;
  }
}

TEST(Harness, UnsatisfiableThresholdIsSkipped) {
  auto c = quick("2.2", 10);
  c.n = 1;
  c.x = 1000.0;
  const auto r = validate(c);
  EXPECT_TRUE(r.skipped);
  EXPECT_EQ(r.trials, 0u);
}

TEST(Harness, MainBoundChecksBCondition) {
  auto c = quick("3.3-1");
  c.instance = custom({std::vector<double>(16, -0.5)}, -1, 1);
  EXPECT_THROW(validate(c), ConfigurationError);
}

TEST(Harness, TighterConstantsGiveSmallerMargins) {
  const auto one = validate(quick("3.3-1", 50));
  const auto two = validate(quick("3.3-2", 50));
  EXPECT_LE(two.mean_margin, one.mean_margin);
  EXPECT_EQ(one.violations, 0u);
  expect_consistent(two);
}

TEST(Harness, SandwichPrecondition) {
  auto c = quick("4.2", 5);
  EXPECT_THROW(validate(c), ConfigurationError);
  c.enforce_precondition = false;
  const auto r = validate(c);
  EXPECT_FALSE(r.precondition_met);
  EXPECT_FALSE(r.notes.empty());
  expect_consistent(r);
}

TEST(Harness, ZeroLossSingletonHasNoExcessRisk) {
  std::vector<double> y(16);
  for (std::size_t i = 0; i < 16; ++i) y[i] = 0.25 + 0.5 * static_cast<double>(i) / 15.0;
  auto c = quick("5.4", 30);
  c.instance = custom({y}, 0, 1, y);
  const auto r = validate(c);
  EXPECT_EQ(r.violations, 0u);
  for (const auto& [k, v] : r.details)
    if (k == "mean_excess_risk") EXPECT_EQ(v, 0.0);
}

TEST(Harness, ExcessRiskRejectsTiedMinimizers) {
  std::vector<double> y(16, 0.5), up(16, 0.6), down(16, 0.4);
  auto c = quick("5.4", 5);
  c.instance = custom({up, down}, 0, 1, y);
  EXPECT_THROW(validate(c), ConfigurationError);
}

TEST(Harness, ScalingFitIsReported) {
  auto c = quick("5.4", 20);
  c.fit_scaling = true;
  const auto r = validate(c);
  bool found = false;
  for (const auto& [k, v] : r.details)
    if (k == "c_fit") {
      found = true;
      EXPECT_GE(v, 0.0);
    }
  EXPECT_TRUE(found);
}
