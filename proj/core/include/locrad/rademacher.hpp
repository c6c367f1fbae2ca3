#pragma once

// Conditional (E_sigma R_n F) and expected (E R_n F) Rademacher averages of
// tabulated classes, by exact sign enumeration or seeded Monte Carlo, with
// localization over empirical or true second-moment balls and the closed
// form for star-hull balls.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locrad/empirical.hpp"

namespace locrad {

enum class RademacherMethod { exact_enumeration, monte_carlo };

std::string to_string(RademacherMethod method);

struct RademacherEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact enumeration
  RademacherMethod method = RademacherMethod::exact_enumeration;
  std::size_t num_sigma_draws = 0;  // sign vectors per sample (2^n when exact)
  std::size_t num_data_draws = 1;
  std::uint64_t seed = 0;
};

/// Largest n for which all 2^n sign vectors are enumerated.
inline constexpr std::size_t kExactEnumerationCap = 20;
inline constexpr std::size_t kDefaultSigmaDraws = 4096;

/// Source of sign vectors for one conditional average.
struct SigmaPlan {
  RademacherMethod method = RademacherMethod::exact_enumeration;
  std::size_t draws = kDefaultSigmaDraws;  // Monte Carlo only
  std::uint64_t seed = 0;                  // Monte Carlo only
  std::size_t cap = kExactEnumerationCap;  // exact only

  static SigmaPlan exact(std::size_t cap = kExactEnumerationCap);
  static SigmaPlan monte_carlo(std::size_t draws, std::uint64_t seed);
  /// Exact when n <= cap, Monte Carlo with `draws` signs otherwise.
  static SigmaPlan automatic(std::size_t n, std::size_t draws, std::uint64_t seed,
                             std::size_t cap = kExactEnumerationCap);
};

/// The s-th Monte Carlo sign vector of a plan with this seed.
SigmaVector monte_carlo_sigma(std::size_t n, std::uint64_t seed, std::size_t s);

/// Mean and standard error of a per-sign-vector quantity.
struct SigmaMean {
  double mean = 0.0;
  double std_error = 0.0;
};

/// R_n f(sigma) for every function of a class on a sample and every sign
/// vector of a plan, plus R_n f0(sigma) for an optional center f0.
///
/// Small tables are materialized; exact enumerations above 2^24 entries are
/// regenerated by Gray-code traversal on every query. Sign vectors are frozen
/// at construction, so every query is a deterministic function of its
/// arguments; this is what keeps localized averages exactly sub-root in r.
class SigmaProjections {
 public:
  SigmaProjections(const TabulatedClass& on_sample, const SigmaPlan& plan,
                   std::optional<std::vector<double>> center = std::nullopt);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_functions() const noexcept { return m_; }
  std::size_t num_sigma() const noexcept { return count_; }
  const SigmaPlan& plan() const noexcept { return plan_; }

  /// E_sigma sup_{f in members} R_n f; the empty class contributes 0.
  SigmaMean supremum(std::span<const std::size_t> members) const;
  /// E_sigma sup over the whole class.
  SigmaMean supremum() const;

  /// E_sigma sup over {f0 + alpha (f - f0) : alpha^2 q_f <= r, alpha in [0,1]}.
  /// q_f is the squared distance of f from the center under whichever
  /// second-moment functional localizes the ball (P_n or P). Per sign vector
  /// the supremum is R_n f0 + max(0, max_f alpha_max(f) R_n (f - f0)) with
  /// alpha_max(f) = min(1, sqrt(r / q_f)) and alpha_max = 1 when q_f = 0.
  SigmaMean star_hull(std::span<const double> q, double r) const;

  /// Wraps a SigmaMean into an estimate tagged with this plan.
  RademacherEstimate estimate(const SigmaMean& mean) const;

 private:
  template <class Visitor>
  void visit(Visitor&& visitor) const;
  template <class PerSigma>
  SigmaMean reduce(PerSigma&& per_sigma) const;

  std::size_t n_;
  std::size_t m_;
  std::size_t count_;
  SigmaPlan plan_;
  std::vector<double> table_;   // on_sample values, row-major m x n
  std::vector<double> center_;  // empty when no center
  bool materialized_ = false;
  std::vector<double> projections_;  // count x (m + 1), last column = center
};

/// Projections for many samples drawn from one distribution; the building
/// block of expected (data-averaged) Rademacher averages.
class ExpectedProjections {
 public:
  /// Draws `data_draws` samples of size n. Sample d uses seed
  /// derive_seed(seed, 2d); Monte Carlo signs for it use derive_seed(seed, 2d+1).
  ExpectedProjections(const TabulatedClass& cls, const DiscreteDistribution& dist, std::size_t n,
                      std::size_t data_draws, const SigmaPlan& inner, std::uint64_t seed);

  std::size_t data_draws() const noexcept { return samples_.size(); }
  std::size_t n() const noexcept { return n_; }
  const SampleSet& sample(std::size_t d) const { return samples_.at(d); }
  const SigmaProjections& projections(std::size_t d) const { return projections_.at(d); }

  /// E R_n {f : f in members}.
  RademacherEstimate supremum(std::span<const std::size_t> members) const;
  RademacherEstimate supremum() const;

  /// E R_n {f in star(F, 0) : P f^2 <= r}; q are the exact P f^2 values.
  RademacherEstimate star_hull_true(std::span<const double> q, double r) const;

 private:
  template <class PerSample>
  RademacherEstimate average(PerSample&& per_sample) const;

  std::size_t n_;
  std::uint64_t seed_;
  SigmaPlan inner_;
  std::vector<SampleSet> samples_;
  std::vector<SigmaProjections> projections_;
};

/// 2^{-n} sum over all sign vectors of sup_f R_n f. Throws CapacityError when
/// n exceeds `cap`.
RademacherEstimate conditional_rademacher_exact(const TabulatedClass& on_sample,
                                                std::size_t cap = kExactEnumerationCap);
RademacherEstimate conditional_rademacher_exact(const TabulatedClass& cls, const SampleSet& sample,
                                                std::size_t cap = kExactEnumerationCap);

/// Mean of sup_f R_n f over `draws` seeded sign vectors; std_error is the
/// sample standard deviation over sqrt(draws).
RademacherEstimate conditional_rademacher_mc(const TabulatedClass& on_sample, std::size_t draws,
                                             std::uint64_t seed);
RademacherEstimate conditional_rademacher_mc(const TabulatedClass& cls, const SampleSet& sample,
                                             std::size_t draws, std::uint64_t seed);

/// E R_n F by Monte Carlo over samples of size n; the inner conditional
/// average follows `inner` (exact per sample when allowed).
RademacherEstimate expected_rademacher(const TabulatedClass& cls, const DiscreteDistribution& dist,
                                       std::size_t n, std::size_t data_draws,
                                       const SigmaPlan& inner, std::uint64_t seed);

/// E_sigma R_n {g in star(F, f0) : P_n (g - f0)^2 <= r}.
RademacherEstimate star_hull_local_conditional(const TabulatedClass& on_sample,
                                               std::span<const double> center, double r,
                                               const SigmaPlan& plan);

struct LossStarHullResult {
  RademacherEstimate estimate;  // value = max(alpha_sup_value, star_value)
  double alpha_sup_value = 0.0; // sup_{alpha in [sqrt(2r), 1]} alpha E_sigma R_n {l_f : P_n l_f <= 2r/alpha^2}
  double best_alpha = 1.0;
  double star_value = 0.0;      // E_sigma R_n {g in star(l_F, 0) : P_n g^2 <= 2r}
};

/// Number of points of the geometric alpha grid on [sqrt(2r), 1].
inline constexpr std::size_t kAlphaGridSize = 64;

/// Geometric grid on [sqrt(2r), 1] with both endpoints; {1} when 2r >= 1 and
/// empty when r = 0.
std::vector<double> alpha_grid(double r, std::size_t points = kAlphaGridSize);

/// Localized averages of a [0,1]-valued loss class on one sample, with the
/// sign vectors frozen so that every r query is deterministic.
///
/// The alpha supremum is exact: with s = 2r/alpha^2 the average
/// phi(s) = E_sigma R_n {l_f : P_n l_f <= s} is a step function of s, so
/// sqrt(2r) phi(s)/sqrt(s) peaks at s = 2r or at a jump s = P_n l_f. For
/// 2r >= 1 the interval collapses to alpha = 1.
class LossLocalComplexity {
 public:
  LossLocalComplexity(const TabulatedClass& loss_on_sample, const SigmaPlan& plan);

  LossStarHullResult evaluate(double r) const;
  double alpha_sup(double r) const;
  double star(double r) const;
  const SigmaProjections& projections() const noexcept { return projections_; }
  std::span<const double> empirical_losses() const noexcept { return mean_; }

 private:
  SigmaMean phi(double s) const;
  std::pair<SigmaMean, double> alpha_sup_detail(double r) const;

  std::vector<double> mean_;     // P_n l_f
  std::vector<double> mean_sq_;  // P_n l_f^2
  std::vector<std::size_t> order_;
  SigmaProjections projections_;
  std::vector<SigmaMean> prefix_sup_;  // phi over the k lowest-loss rows, k = 0..m
};

/// LossLocalComplexity(loss_on_sample, plan).evaluate(r).
LossStarHullResult loss_star_hull_local_conditional(const TabulatedClass& loss_on_sample, double r,
                                                    const SigmaPlan& plan);

/// Monte Carlo estimate of E sup_f (Pf - P_n f) (upper = true) or
/// E sup_f (P_n f - Pf) (upper = false) over samples of size n.
RademacherEstimate expected_uniform_deviation(const TabulatedClass& cls,
                                              const DiscreteDistribution& dist, std::size_t n,
                                              std::size_t data_draws, std::uint64_t seed,
                                              bool upper = true);

}  // namespace locrad
