#pragma once

// Binary classification with the discrete loss 1[y != y']: loss tables,
// weighted empirical risk minimization, the Lagrangian J(mu) and the
// computable upper bound on the empirical local complexity it yields.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locrad/bounds.hpp"
#include "locrad/empirical.hpp"
#include "locrad/rademacher.hpp"
#include "locrad/subroot.hpp"

namespace locrad {

/// Points X_1..X_n with labels Y_i in {-1, +1}. Points are either ids of a
/// ground space or numeric 1-D features (for threshold stumps).
class LabeledSample {
 public:
  LabeledSample(std::vector<std::string> xs, std::vector<int> ys);
  static LabeledSample from_features(std::vector<double> features, std::vector<int> ys);

  std::size_t n() const noexcept { return ys_.size(); }
  const std::vector<std::string>& xs() const noexcept { return xs_; }
  const std::vector<int>& ys() const noexcept { return ys_; }
  bool has_features() const noexcept { return !features_.empty(); }
  const std::vector<double>& features() const noexcept { return features_; }

  /// Positions of the xs in a ground space; throws LookupError for unknown ids.
  SampleSet to_sample(const DiscreteDistribution& dist) const;

 private:
  std::vector<std::string> xs_;
  std::vector<int> ys_;
  std::vector<double> features_;
};

/// Nonnegative weights w_i and targets t_i in {-1, +1}.
struct WeightedErmProblem {
  std::vector<double> weights;
  std::vector<int> targets;
};

struct ErmResult {
  std::size_t index = 0;  // row of the class, or stump number
  std::string name;
  double value = 0.0;     // (1/n) sum_i w_i 1[f(X_i) != t_i]
};

/// Exact weighted ERM over a finite class of +-1 predictors tabulated on the
/// sample, or over all threshold stumps x -> s * sign(x - theta) on 1-D
/// features.
class ErmOracle {
 public:
  enum class Kind { finite_class, threshold_stumps };

  /// Predictor values at the n sample positions; every value must be +-1.
  static ErmOracle finite_class(TabulatedClass predictors_on_sample);
  static ErmOracle threshold_stumps(std::vector<double> features);

  Kind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  /// Finite class: the predictors; stumps: the full stump dictionary.
  const TabulatedClass& predictors() const noexcept { return *predictors_; }

  ErmResult minimize(const WeightedErmProblem& problem) const;

 private:
  ErmOracle(Kind kind, std::size_t n) : kind_(kind), n_(n) {}

  Kind kind_;
  std::size_t n_;
  std::optional<TabulatedClass> predictors_;
  std::vector<double> features_;
  std::vector<std::size_t> sorted_;     // sample positions by feature
  std::vector<std::size_t> cuts_;       // valid cut positions in sorted order
};

/// Every realizable threshold stump on the features, tabulated on the sample:
/// for each cut k between distinct sorted values (and both ends), the stump
/// predicting +1 above the cut and its negation.
TabulatedClass stump_dictionary(const std::vector<double>& features);

ErmResult weighted_erm(const ErmOracle& oracle, const WeightedErmProblem& problem);

/// Loss rows l_f(X_i, Y_i) = 1[f(X_i) != Y_i], range [0, 1].
TabulatedClass discrete_loss_table(const TabulatedClass& predictors_on_sample,
                                   const std::vector<int>& ys);

struct Lemma64Result {
  double lhs = 0.0;  // E_sigma R_n {l_f : P_n l_f <= b}
  double rhs = 0.0;  // 1/2 - E_sigma min {P_n l(f(X), sigma) : P_n l(f(X), Y) <= b}
  bool empty = false;  // no predictor meets the constraint; both sides set to 0
};

/// Both sides of the identity relating localized loss averages to sign
/// fitting, by full sign enumeration.
Lemma64Result lemma64_identity(const TabulatedClass& predictors_on_sample,
                               const std::vector<int>& ys, double b,
                               std::size_t cap = kExactEnumerationCap);

/// J(mu) = min_f (1/n) sum_i |sigma_i + mu Y_i| 1[f(X_i) != sign(sigma_i + mu Y_i)],
/// with sign(0) = +1 (its weight is 0).
double j_of_mu(const ErmOracle& oracle, const std::vector<int>& ys, const SigmaVector& sigma,
               double mu);

/// {0} plus `points` geometric values on [2^-10, 2^7].
std::vector<double> default_mu_grid(std::size_t points = 128);

struct Thm63Result {
  double value = 0.0;       // c * complexity + 26 x/n
  double complexity = 0.0;  // sup over alpha of alpha E_sigma min_mu (...)
  double std_error = 0.0;   // of the complexity term (0 when exact)
  double best_alpha = 1.0;
  RademacherMethod method = RademacherMethod::exact_enumeration;
  std::size_t num_sigma = 0;
};

inline constexpr double kThm63Multiplier = 20.0;
inline constexpr std::size_t kThm63SigmaDraws = 1024;

/// Upper bound on psi_hat_n(r) via J(mu). The mu minimum is taken over
/// mu_grid; the alpha supremum over alpha_grid is bracketed so the value also
/// bounds the supremum over the continuous interval [sqrt(2r), 1].
Thm63Result thm63_psi_hat_upper(const ErmOracle& oracle, const std::vector<int>& ys, double r,
                                double x, const SigmaPlan& plan,
                                const std::vector<double>& mu_grid,
                                const std::vector<double>& alpha_points);

/// Defaults: exact signs up to the cap, else 1024 seeded draws; default grids.
Thm63Result thm63_psi_hat_upper(const ErmOracle& oracle, const std::vector<int>& ys, double r,
                                double x, std::uint64_t seed);

struct Cor62Result {
  BoundReport report;
  FixedPointResult fixed_point;
  double loss_complexity_factor = kThm63Multiplier;
};

/// psi_hat_n(r) = 20 sup_{alpha in [sqrt(2r), 1]} alpha E_sigma R_n {l_f : P_n l_f <= 2r/alpha^2} + 26x/n,
/// its fixed point, and the resulting classification bound.
Cor62Result cor62_bound(const ErmOracle& oracle, const std::vector<int>& ys, double x, double K,
                        std::uint64_t seed, std::optional<double> c = std::nullopt);

/// The psi_hat_n evaluator used by cor62_bound.
SubRootEvaluator cor62_psi_hat(const TabulatedClass& loss_on_sample, double x, const SigmaPlan& plan);

}  // namespace locrad
