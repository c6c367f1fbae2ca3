#include <gtest/gtest.h>

#include <cmath>

#include "locrad/bounds.hpp"
#include "locrad/error.hpp"

using namespace locrad;

namespace {

BoundParams params(std::size_t n, double x) {
  BoundParams p;
  p.n = n;
  p.x = x;
  return p;
}

}  // namespace

TEST(Constants, MainBoundTables) {
  EXPECT_EQ(lookup(constants_for("3.3-1"), "c1"), 704.0);
  EXPECT_EQ(lookup(constants_for("3.3-1"), "c2"), 26.0);
  EXPECT_EQ(lookup(constants_for("3.3"), "c1"), 704.0);
  EXPECT_EQ(lookup(constants_for("3.3-2"), "c1"), 6.0);
  EXPECT_EQ(lookup(constants_for("3.3-2"), "c2"), 5.0);
}

TEST(Constants, DataDependentTablesDependOnB) {
  for (double B : {1.0, 4.0, 10.0, 12.5, 40.0}) {
    const double c1 = 2.0 * std::max(10.0, B);
    EXPECT_EQ(lookup(constants_for("4.1", B), "c1"), c1);
    EXPECT_EQ(lookup(constants_for("4.1", B), "c2"), c1 + 11.0);
    const auto t42 = constants_for("4.2", B);
    EXPECT_EQ(lookup(t42, "c1"), c1);
    EXPECT_EQ(lookup(t42, "c2"), 13.0);
    EXPECT_EQ(lookup(t42, "c3"), std::max(26.0, (13.0 + 2.0 * c1) / 3.0));
    EXPECT_EQ(lookup(t42, "sandwich"), 9.0 * (1.0 + c1) * (1.0 + c1));
  }
  EXPECT_EQ(lookup(constants_for("4.2", 3.0), "sandwich"), 3969.0);
}

TEST(Constants, ExcessRiskTables) {
  const double B = 1.0, L = 2.0;
  const auto t = constants_for("5.4", B, L);
  const double c1 = 2.0 * L * std::max(B, 10.0 * L);
  const double c2 = 11.0 * L * L + c1;
  EXPECT_EQ(lookup(t, "c1"), c1);
  EXPECT_EQ(lookup(t, "c2"), c2);
  EXPECT_EQ(lookup(t, "c3"), 2824.0 + 4.0 * B * (11.0 * L + 27.0 * B) / c2);
  EXPECT_EQ(lookup(constants_for("5.3"), "r_factor"), 705.0);
  EXPECT_EQ(lookup(constants_for("5.1"), "psi_factor"), 20.0);
  EXPECT_EQ(lookup(constants_for("5.1"), "psi_x"), 13.0);
}

TEST(Constants, UnknownIdThrows) {
  EXPECT_THROW(constants_for("9.9"), LookupError);
  EXPECT_THROW(lookup(constants_for("3.3-1"), "c9"), LookupError);
  for (const auto& id : known_theorem_ids()) EXPECT_NO_THROW(constants_for(id));
}

TEST(MainBounds, Thm33Values) {
  BoundParams p = params(100, 2.0);
  p.K = 3.0;
  p.B = 2.0;
  const auto one = main_bound_thm33(p, 0.01, 1, Direction::p_vs_pn);
  EXPECT_DOUBLE_EQ(one.bound_value, 704.0 * 3.0 * 0.01 / 2.0 + 2.0 * (11.0 + 26.0 * 6.0) / 100.0);
  EXPECT_DOUBLE_EQ(lookup(one.constants, "multiplier"), 1.5);
  EXPECT_EQ(one.confidence_k, 1);
  EXPECT_NEAR(one.confidence, 1.0 - std::exp(-2.0), 1e-15);
  const auto two = main_bound_thm33(p, 0.01, 2, Direction::pn_vs_p);
  EXPECT_DOUBLE_EQ(two.bound_value, 6.0 * 3.0 * 0.01 / 2.0 + 2.0 * (11.0 + 5.0 * 6.0) / 100.0);
  EXPECT_DOUBLE_EQ(lookup(two.constants, "multiplier"), 4.0 / 3.0);
  EXPECT_LT(two.bound_value, one.bound_value);
}

TEST(MainBounds, Thm41AndSandwich) {
  BoundParams p = params(50, 1.0);
  p.K = 2.0;
  const auto b41 = main_bound_thm41(p, 0.02, Direction::p_vs_pn);
  EXPECT_DOUBLE_EQ(b41.bound_value, 6.0 * 2.0 * 0.02 + (11.0 + 10.0) / 50.0);
  EXPECT_EQ(b41.confidence_k, 3);
  const auto s = sandwich_thm42(p, 0.1);
  EXPECT_DOUBLE_EQ(s.bound_value, 3969.0 * 0.1);
  EXPECT_DOUBLE_EQ(lookup(s.constants, "r_star_min"), 26.0 / 50.0);
  EXPECT_EQ(s.confidence_k, 4);
}

TEST(MainBounds, PreconditionsAreChecked) {
  BoundParams p = params(50, 1.0);
  p.K = 1.0;
  EXPECT_THROW(main_bound_thm41(p, 0.1, Direction::p_vs_pn), PreconditionError);
  p.K = 2.0;
  p.B = 0.5;
  EXPECT_THROW(main_bound_thm41(p, 0.1, Direction::p_vs_pn), PreconditionError);
  p.B = 1.0;
  p.x = 0.0;
  EXPECT_THROW(main_bound_thm41(p, 0.1, Direction::p_vs_pn), PreconditionError);
  p.x = 1.0;
  p.n = 0;
  EXPECT_THROW(main_bound_thm41(p, 0.1, Direction::p_vs_pn), PreconditionError);
  p.n = 10;
  EXPECT_THROW(main_bound_thm41(p, -0.1, Direction::p_vs_pn), PreconditionError);
  p.L = 0.0;
  EXPECT_THROW(excess_risk_bound_cor53(p, 0.1), PreconditionError);
}

TEST(ExcessRisk, Values) {
  BoundParams p = params(200, 3.0);
  p.L = 2.0;
  p.B = 1.0;
  EXPECT_DOUBLE_EQ(excess_risk_bound_cor53(p, 0.01).bound_value, 7.05 + 49.0 * 3.0 / 200.0);
  const auto t54 = excess_risk_bound_thm54(p, 0.01);
  EXPECT_DOUBLE_EQ(t54.bound_value, 7.05 + 49.0 * 3.0 / 200.0);
  EXPECT_EQ(t54.confidence_k, 4);
  const auto t52 = excess_risk_bound_thm52(p, 0.04, 0.01, 3.0);
  EXPECT_DOUBLE_EQ(t52.bound_value, 0.04 + 3.0 * (0.02 + 0.01));
  p.K = 2.0;
  EXPECT_DOUBLE_EQ(loss_class_bound_cor51(p, 0.01).bound_value, 0.12 + 3.0 * 21.0 / 200.0);
  EXPECT_DOUBLE_EQ(classification_bound_cor62(p, 0.01).bound_value, 0.12 + 3.0 * 21.0 / 200.0);
  EXPECT_DOUBLE_EQ(classification_bound_cor62(p, 0.01, 5.0).bound_value, 10.0 * (0.01 + 3.0 / 200.0));
}

TEST(Talagrand, ExpectedAndConditionalForms) {
  BoundParams p = params(100, 2.0);
  p.a = -1.0;
  p.b = 1.0;
  const auto e = talagrand_deviation(p, 0.1, 0.5, 1.0, TalagrandVariant::expected);
  EXPECT_DOUBLE_EQ(e.bound_value, 4.0 * 0.1 + std::sqrt(2.0 * 0.5 * 2.0 / 100.0) +
                                      2.0 * (1.0 / 3.0 + 1.0) * 2.0 / 100.0);
  EXPECT_EQ(e.confidence_k, 1);
  const auto c = talagrand_deviation(p, 0.1, 0.5, 0.5, TalagrandVariant::conditional);
  EXPECT_DOUBLE_EQ(c.bound_value, 6.0 * 0.1 + std::sqrt(2.0 * 0.5 * 2.0 / 100.0) +
                                      2.0 * (1.0 / 3.0 + 2.0 + 1.5 / 0.5) * 2.0 / 100.0);
  EXPECT_EQ(c.confidence_k, 2);
  EXPECT_THROW(talagrand_deviation(p, 0.1, 0.5, 1.0, TalagrandVariant::conditional), PreconditionError);
}

TEST(Talagrand, OptimizedAlphaIsNoWorseThanFixedChoices) {
  BoundParams p = params(100, 2.0);
  const auto best = talagrand_deviation_optimized(p, 0.05, 0.2, TalagrandVariant::expected);
  for (double a : {0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 5.0})
    EXPECT_LE(best.bound_value, talagrand_deviation(p, 0.05, 0.2, a, TalagrandVariant::expected).bound_value + 1e-9);
  // d/da [2a C + (b-a)x/(n a)] = 0 at a = sqrt(x/(2 n C)).
  EXPECT_NEAR(lookup(best.inputs, "alpha"), std::sqrt(2.0 / (2.0 * 100.0 * 0.05)), 1e-6);
}

TEST(Talagrand, GoldenSectionFindsMinimum) {
  EXPECT_NEAR(golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, 0.0, 1.0), 0.3, 1e-7);
}

TEST(Containment, ThresholdIsFirstGridPointMeetingCondition) {
  BoundParams p = params(100, 1.0);
  const std::vector<double> grid{0.01, 0.1, 0.5, 1.0, 2.0};
  auto complexity = [](double r) { return 0.02 * std::sqrt(r); };
  const auto t = ball_containment_threshold(p, 1.0, grid, complexity, ContainmentVariant::population_ball);
  ASSERT_TRUE(t.satisfied);
  EXPECT_DOUBLE_EQ(t.r, 0.5);
  EXPECT_DOUBLE_EQ(t.required, 10.0 * 0.02 * std::sqrt(0.5) + 0.11);
  const auto s = ball_containment_threshold(p, 1.0, grid, complexity, ContainmentVariant::empirical_ball);
  ASSERT_TRUE(s.satisfied);
  EXPECT_DOUBLE_EQ(s.r, 1.0);
  auto big = [](double) { return 10.0; };
  EXPECT_FALSE(ball_containment_threshold(p, 1.0, grid, big, ContainmentVariant::empirical_ball).satisfied);
}

TEST(Concentration, BennettAndRademacherForms) {
  EXPECT_DOUBLE_EQ(bennett_h(0.0), 0.0);
  EXPECT_NEAR(bennett_h(1.0), 2.0 * std::log(2.0) - 1.0, 1e-15);
  const auto t = bennett_tail_thmA1(10, 0.25, 1.0, 0.5, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(t.v, 10.0 * 0.25 + 1.0);
  EXPECT_NEAR(t.tail_probability, std::exp(-3.5 * bennett_h(1.0 / 3.5)), 1e-15);
  EXPECT_DOUBLE_EQ(t.additive, 0.5 + std::sqrt(2.0 * 2.0 * 3.5) + 2.0 / 3.0);
  EXPECT_EQ(bennett_tail_thmA1(10, 0.0, 1.0, 0.0, 2.0, 0.5).tail_probability, 0.0);
  const auto up = rademacher_concentration_thmA2(2.0, 1.0, 0.3, ConcentrationDirection::upper);
  EXPECT_DOUBLE_EQ(up.bound_value, 0.3 + std::sqrt(0.6) + 2.0 / 6.0);
  const auto lo = rademacher_concentration_thmA2(2.0, 1.0, 0.3, ConcentrationDirection::lower);
  EXPECT_DOUBLE_EQ(lo.bound_value, 0.3 - std::sqrt(0.6));
}

TEST(Concentration, ConditionalExpectedConversionsBracket) {
  const double cond = 0.2;
  const double e = expected_from_conditional(cond, 2.0, 100, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(e, 0.4 + 2.0 / (4.0 * 100.0 * 0.25));
  EXPECT_GT(e, cond);
  const double back = conditional_from_expected(0.2, 2.0, 100, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(back, 1.5 * 0.2 + 2.0 / 200.0 * (1.0 + 1.0 / 3.0));
  EXPECT_THROW(expected_from_conditional(cond, 2.0, 100, 1.0, 1.0), PreconditionError);
}
