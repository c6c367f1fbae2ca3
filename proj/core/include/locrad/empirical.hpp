#pragma once

// Finite probability spaces, samples, tabulated function classes and the
// elementary functionals Pf, P_n f, R_n f and Var[f].
//
// A function is always represented by its values: either one value per point
// of a DiscreteDistribution ("over points") or one value per sample position
// ("on sample"). TabulatedClass stores a whole class as a row-major table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace locrad {

class SampleSet;

/// Finite ground space with point masses and optional {-1,+1} labels.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<std::string> ids, std::vector<double> masses,
                       std::optional<std::vector<int>> labels = std::nullopt);

  /// Uniform masses over `count` points named "0", "1", ...
  static DiscreteDistribution uniform(std::size_t count);

  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const std::string> ids() const noexcept { return ids_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(std::size_t point) const { return masses_.at(point); }

  bool has_labels() const noexcept { return !labels_.empty(); }
  std::span<const int> labels() const noexcept { return labels_; }

  /// Position of a point id; throws LookupError when absent.
  std::size_t index_of(std::string_view id) const;

  /// Draws n i.i.d. points by inverse-CDF sampling. Draw i uses the counter
  /// stream (seed, i), so samples are reproducible and prefix-stable.
  SampleSet sample(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> masses_;
  std::vector<int> labels_;
  std::vector<double> cumulative_;
};

/// n point positions drawn from a distribution, plus the seed that drew them.
class SampleSet {
 public:
  SampleSet(std::vector<std::size_t> indices, std::size_t num_points, std::uint64_t seed = 0);

  std::size_t n() const noexcept { return indices_.size(); }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  std::size_t num_points() const noexcept { return num_points_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::vector<std::size_t> indices_;
  std::size_t num_points_;
  std::uint64_t seed_;
};

/// Finite function class as a [num_functions x num_points] table with a
/// declared range [range_lo, range_hi] that every value must respect.
class TabulatedClass {
 public:
  TabulatedClass(std::size_t num_functions, std::size_t num_points, std::vector<double> values,
                 double range_lo, double range_hi, std::vector<std::string> names = {});

  static TabulatedClass from_rows(const std::vector<std::vector<double>>& rows, double range_lo,
                                  double range_hi, std::vector<std::string> names = {});

  std::size_t num_functions() const noexcept { return num_functions_; }
  std::size_t num_points() const noexcept { return num_points_; }
  double range_lo() const noexcept { return range_lo_; }
  double range_hi() const noexcept { return range_hi_; }
  /// max(|range_lo|, |range_hi|): the b of a [-b, b] envelope.
  double envelope() const noexcept;

  std::span<const double> row(std::size_t f) const {
    return {values_.data() + f * num_points_, num_points_};
  }
  double operator()(std::size_t f, std::size_t point) const {
    return values_[f * num_points_ + point];
  }
  std::span<const double> values() const noexcept { return values_; }
  const std::string& name(std::size_t f) const { return names_.at(f); }
  std::span<const std::string> names() const noexcept { return names_; }

  /// Columns re-indexed by sample position: entry (f, i) = f(X_i).
  TabulatedClass on_sample(const SampleSet& sample) const;

  /// Rows listed in `rows`, in that order; nullopt when `rows` is empty.
  std::optional<TabulatedClass> subset(std::span<const std::size_t> rows) const;

  /// {c f : f in F}; the range scales with c (c may be negative).
  TabulatedClass scaled(double c) const;

  /// F with the zero function appended (range widened to include 0).
  TabulatedClass with_zero() const;

 private:
  std::size_t num_functions_;
  std::size_t num_points_;
  std::vector<double> values_;
  double range_lo_;
  double range_hi_;
  std::vector<std::string> names_;
};

/// Rademacher signs sigma_1..sigma_n, each exactly -1 or +1.
class SigmaVector {
 public:
  explicit SigmaVector(std::vector<int> signs);

  /// Sign i is +1 when bit i of `mask` is set, -1 otherwise.
  static SigmaVector from_mask(std::size_t n, std::uint64_t mask);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  std::span<const int> signs() const noexcept { return signs_; }

 private:
  std::vector<int> signs_;
};

/// star(F, f0) = {f0 + alpha (f - f0) : f in F, alpha in [0, 1]}.
struct StarHullSpec {
  StarHullSpec(TabulatedClass base, std::vector<double> center);

  TabulatedClass base;
  std::vector<double> center;
};

/// Pf = sum_i mass_i f(point_i).
double true_mean(const DiscreteDistribution& dist, std::span<const double> f);

/// Var[f] = P f^2 - (P f)^2, clamped at 0 against rounding.
double variance(const DiscreteDistribution& dist, std::span<const double> f);

/// (1/n) sum_i values[i].
double sample_mean(std::span<const double> values_on_sample);

/// P_n f = (1/n) sum_i f(X_i) for f given over the ground space.
double empirical_mean(const SampleSet& sample, std::span<const double> f_over_points);

/// R_n f = (1/n) sum_i sigma_i f(X_i) for f given on the sample.
double rademacher_sum(const SigmaVector& sigma, std::span<const double> values_on_sample);

/// R_n f for f given over the ground space.
double rademacher_sum(const SampleSet& sample, const SigmaVector& sigma,
                      std::span<const double> f_over_points);

/// Localization functional T(f).
enum class Functional {
  pn_sq,    // P_n f^2
  p_sq,     // P f^2
  pn_mean,  // P_n f
};

/// T(f) for every row of a class tabulated over the ground space of `dist`.
std::vector<double> functional_values(const TabulatedClass& cls, const SampleSet& sample,
                                      const DiscreteDistribution& dist, Functional functional);

/// Rows of `cls` with T(f) <= r, in their original order.
std::vector<std::size_t> localized_indices(const TabulatedClass& cls, const SampleSet& sample,
                                           const DiscreteDistribution& dist,
                                           Functional functional, double r);

/// {f in F : T(f) <= r}; nullopt when no function qualifies.
std::optional<TabulatedClass> localized_subclass(const TabulatedClass& cls,
                                                 const SampleSet& sample,
                                                 const DiscreteDistribution& dist,
                                                 Functional functional, double r);

}  // namespace locrad
