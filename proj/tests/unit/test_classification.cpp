#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "locrad/classification.hpp"
#include "locrad/error.hpp"
#include "oracles.hpp"

using namespace locrad;

namespace {

std::vector<int> random_labels(std::mt19937_64& gen, std::size_t n) {
  std::vector<int> ys(n);
  for (int& y : ys) y = gen() % 2 ? 1 : -1;
  return ys;
}

oracle::Rows random_predictors(std::mt19937_64& gen, std::size_t m, std::size_t n) {
  oracle::Rows rows(m, std::vector<double>(n));
  for (auto& row : rows)
    for (double& v : row) v = gen() % 2 ? 1.0 : -1.0;
  return rows;
}

// Every sign pattern x -> s * sign(x - theta) over thresholds at -inf, +inf and
// the midpoints of distinct sorted values.
std::set<std::vector<double>> brute_stumps(const std::vector<double>& xs) {
  std::vector<double> thetas{-std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] > sorted[i - 1]) thetas.push_back(0.5 * (sorted[i] + sorted[i - 1]));
  std::set<std::vector<double>> out;
  for (double t : thetas)
    for (double s : {1.0, -1.0}) {
      std::vector<double> row;
      for (double x : xs) row.push_back(s * (x >= t ? 1.0 : -1.0));
      out.insert(row);
    }
  return out;
}

double brute_weighted_min(const oracle::Rows& rows, const WeightedErmProblem& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    double c = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != p.targets[i]) c += p.weights[i];
    best = std::min(best, c / static_cast<double>(row.size()));
  }
  return best;
}

oracle::Rows rows_of(const TabulatedClass& cls) {
  oracle::Rows rows;
  for (std::size_t f = 0; f < cls.num_functions(); ++f) rows.emplace_back(cls.row(f).begin(), cls.row(f).end());
  return rows;
}

}  // namespace

TEST(Stumps, DictionaryEqualsBruteForceSet) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> xs(1 + gen() % 9);
    for (double& x : xs) x = static_cast<double>(gen() % 5);
    const auto rows = rows_of(stump_dictionary(xs));
    const std::set<std::vector<double>> got(rows.begin(), rows.end());
    EXPECT_EQ(got, brute_stumps(xs));
  }
}

TEST(Stumps, WeightedErmMatchesBruteForce) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + gen() % 12;
    std::vector<double> xs(n);
    for (double& x : xs) x = static_cast<double>(gen() % 6);
    WeightedErmProblem p;
    for (std::size_t i = 0; i < n; ++i) {
      p.weights.push_back(u(gen));
      p.targets.push_back(gen() % 2 ? 1 : -1);
    }
    const auto oracle_stumps = ErmOracle::threshold_stumps(xs);
    const auto got = weighted_erm(oracle_stumps, p);
    const auto patterns = brute_stumps(xs);
    const oracle::Rows brute(patterns.begin(), patterns.end());
    EXPECT_NEAR(got.value, brute_weighted_min(brute, p), 1e-12);
  }
}

TEST(FiniteClass, WeightedErmMatchesBruteForceAndRejectsNonBinary) {
  std::mt19937_64 gen(10);
  const auto rows = random_predictors(gen, 7, 9);
  WeightedErmProblem p{std::vector<double>(9, 1.0), random_labels(gen, 9)};
  const auto erm = ErmOracle::finite_class(TabulatedClass::from_rows(rows, -1, 1));
  EXPECT_NEAR(erm.minimize(p).value, brute_weighted_min(rows, p), 1e-15);
  EXPECT_THROW(ErmOracle::finite_class(TabulatedClass::from_rows({{0.5, 1.0}}, -1, 1)), PreconditionError);
  p.weights[0] = -1.0;
  EXPECT_THROW(erm.minimize(p), PreconditionError);
}

TEST(Lemma64, IdentityHoldsExactly) {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + gen() % 8;
    const auto rows = random_predictors(gen, 1 + gen() % 6, n);
    const auto ys = random_labels(gen, n);
    for (double b : {0.0, 0.2, 0.5, 1.0}) {
      const auto res = lemma64_identity(TabulatedClass::from_rows(rows, -1, 1), ys, b);
      if (res.empty) continue;
      EXPECT_NEAR(res.lhs, res.rhs, 1e-12);
      // Independent check of the left side.
      const auto loss = discrete_loss_table(TabulatedClass::from_rows(rows, -1, 1), ys);
      oracle::Rows members;
      for (const auto& l : rows_of(loss)) {
        double m = 0.0;
        for (double v : l) m += v;
        if (m / static_cast<double>(n) <= b) members.push_back(l);
      }
      EXPECT_NEAR(res.lhs, oracle::conditional_average(members, n), 1e-12);
    }
  }
}

TEST(Lemma64, EmptyConstraintSetReportsZero) {
  const auto res = lemma64_identity(TabulatedClass::from_rows({{1, 1}}, -1, 1), {-1, -1}, 0.0);
  EXPECT_TRUE(res.empty);
  EXPECT_EQ(res.lhs, 0.0);
  EXPECT_EQ(res.rhs, 0.0);
}

TEST(JOfMu, MatchesBruteForce) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + gen() % 8;
    const auto rows = random_predictors(gen, 1 + gen() % 6, n);
    const auto ys = random_labels(gen, n);
    const auto erm = ErmOracle::finite_class(TabulatedClass::from_rows(rows, -1, 1));
    const auto sigma = SigmaVector::from_mask(n, gen() % (std::uint64_t{1} << n));
    for (double mu : {0.0, 0.5, 1.0, 3.0}) {
      double want = std::numeric_limits<double>::infinity();
      for (const auto& f : rows) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double z = sigma[i] + mu * ys[i];
          const double s = z >= 0.0 ? 1.0 : -1.0;
          if (f[i] != s) c += std::abs(z);
        }
        want = std::min(want, c / static_cast<double>(n));
      }
      EXPECT_NEAR(j_of_mu(erm, ys, sigma, mu), want, 1e-12);
    }
  }
}

TEST(Thm63, UpperBoundsTheLocalComplexity) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 8; ++t) {
    const std::size_t n = 4 + gen() % 5;
    const auto rows = random_predictors(gen, 2 + gen() % 5, n);
    const auto ys = random_labels(gen, n);
    const auto erm = ErmOracle::finite_class(TabulatedClass::from_rows(rows, -1, 1));
    const auto losses = rows_of(discrete_loss_table(erm.predictors(), ys));
    for (double r : {0.01, 0.05, 0.2, 0.6}) {
      const auto res = thm63_psi_hat_upper(erm, ys, r, 1.0, 7);
      EXPECT_EQ(res.method, RademacherMethod::exact_enumeration);
      const double want = 20.0 * oracle::loss_alpha_sup(losses, n, r) + 26.0 / static_cast<double>(n);
      EXPECT_GE(res.value, want - 1e-12) << "n " << n << " r " << r;
    }
  }
}

TEST(Cor62, BoundIsAFixedPointOfPsiHat) {
  std::mt19937_64 gen(15);
  std::vector<double> xs(12);
  for (double& x : xs) x = static_cast<double>(gen() % 100) / 100.0;
  const auto ys = random_labels(gen, 12);
  const auto erm = ErmOracle::threshold_stumps(xs);
  const auto res = cor62_bound(erm, ys, 1.0, 2.0, 3);
  const auto psi = cor62_psi_hat(discrete_loss_table(erm.predictors(), ys), 1.0, SigmaPlan::exact());
  EXPECT_NEAR(psi(res.fixed_point.r_star), res.fixed_point.r_star, 1e-5 * res.fixed_point.r_star);
  EXPECT_DOUBLE_EQ(res.report.bound_value,
                   12.0 * res.fixed_point.r_star + (11.0 + 10.0) / 12.0);
  EXPECT_THROW(cor62_bound(erm, ys, 1.0, 1.0, 3), PreconditionError);
}

TEST(LabeledSampleTest, Validation) {
  EXPECT_THROW(LabeledSample({"a"}, {0}), PreconditionError);
  EXPECT_THROW(LabeledSample({"a", "b"}, {1}), DimensionError);
  const auto s = LabeledSample::from_features({0.5, 1.5}, {1, -1});
  EXPECT_TRUE(s.has_features());
  const DiscreteDistribution d({"a", "b"}, {0.5, 0.5});
  EXPECT_THROW(s.to_sample(d), LookupError);
}
