#include "locrad/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "locrad/error.hpp"
#include "locrad/rng.hpp"

namespace locrad {
namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kRangeSlack = 1e-12;

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) +
                         " values, got " + std::to_string(got));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<std::string> ids, std::vector<double> masses,
                                           std::optional<std::vector<int>> labels)
    : ids_(std::move(ids)), masses_(std::move(masses)) {
  if (masses_.empty()) throw PreconditionError("distribution needs at least one point");
  require_length(ids_.size(), masses_.size(), "point ids");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) throw PreconditionError("duplicate point id '" + id + "'");
  }
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw PreconditionError("point masses must be nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw PreconditionError("point masses sum to " + std::to_string(total) + ", not 1");
  }
  if (labels) {
    require_length(labels->size(), masses_.size(), "labels");
    for (int y : *labels) {
      if (y != 1 && y != -1) throw PreconditionError("labels must be -1 or +1");
    }
    labels_ = std::move(*labels);
  }
  cumulative_.resize(masses_.size());
  std::partial_sum(masses_.begin(), masses_.end(), cumulative_.begin());
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t count) {
  if (count == 0) throw PreconditionError("distribution needs at least one point");
  std::vector<std::string> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = std::to_string(i);
  return {std::move(ids), std::vector<double>(count, 1.0 / static_cast<double>(count))};
}

std::size_t DiscreteDistribution::index_of(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw LookupError("unknown point id '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - ids_.begin());
}

SampleSet DiscreteDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw PreconditionError("sample size must be at least 1");
  std::vector<std::size_t> indices(n);
  const double total = cumulative_.back();
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
    if (k >= masses_.size()) k = masses_.size() - 1;
    // never land on a zero-mass point through rounding at the boundary
    while (masses_[k] == 0.0 && k > 0) --k;
    indices[i] = k;
  }
  return {std::move(indices), masses_.size(), seed};
}

// ---------------------------------------------------------------------------
// SampleSet

SampleSet::SampleSet(std::vector<std::size_t> indices, std::size_t num_points, std::uint64_t seed)
    : indices_(std::move(indices)), num_points_(num_points), seed_(seed) {
  if (indices_.empty()) throw PreconditionError("sample size must be at least 1");
  for (std::size_t idx : indices_) {
    if (idx >= num_points_) {
      throw DimensionError("sample index " + std::to_string(idx) + " outside ground space of " +
                           std::to_string(num_points_) + " points");
    }
  }
}

// ---------------------------------------------------------------------------
// TabulatedClass

TabulatedClass::TabulatedClass(std::size_t num_functions, std::size_t num_points,
                               std::vector<double> values, double range_lo, double range_hi,
                               std::vector<std::string> names)
    : num_functions_(num_functions),
      num_points_(num_points),
      values_(std::move(values)),
      range_lo_(range_lo),
      range_hi_(range_hi),
      names_(std::move(names)) {
  if (num_functions_ == 0) throw PreconditionError("a function class needs at least one function");
  if (num_points_ == 0) throw PreconditionError("functions need at least one point");
  if (!(range_lo_ <= range_hi_)) throw PreconditionError("range_lo must not exceed range_hi");
  require_length(values_.size(), num_functions_ * num_points_, "class table");
  const double lo = range_lo_ - kRangeSlack * std::max(1.0, std::abs(range_lo_));
  const double hi = range_hi_ + kRangeSlack * std::max(1.0, std::abs(range_hi_));
  for (double v : values_) {
    if (!(v >= lo && v <= hi)) {
      throw PreconditionError("function value " + std::to_string(v) + " outside declared range [" +
                              std::to_string(range_lo_) + ", " + std::to_string(range_hi_) + "]");
    }
  }
  if (names_.empty()) {
    names_.resize(num_functions_);
    for (std::size_t f = 0; f < num_functions_; ++f) names_[f] = "f" + std::to_string(f);
  }
  require_length(names_.size(), num_functions_, "function names");
}

TabulatedClass TabulatedClass::from_rows(const std::vector<std::vector<double>>& rows,
                                         double range_lo, double range_hi,
                                         std::vector<std::string> names) {
  if (rows.empty()) throw PreconditionError("a function class needs at least one function");
  const std::size_t width = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * width);
  for (const auto& row : rows) {
    require_length(row.size(), width, "class row");
    values.insert(values.end(), row.begin(), row.end());
  }
  return {rows.size(), width, std::move(values), range_lo, range_hi, std::move(names)};
}

double TabulatedClass::envelope() const noexcept {
  return std::max(std::abs(range_lo_), std::abs(range_hi_));
}

TabulatedClass TabulatedClass::on_sample(const SampleSet& sample) const {
  require_length(sample.num_points(), num_points_, "sample ground space");
  const std::size_t n = sample.n();
  std::vector<double> values(num_functions_ * n);
  for (std::size_t f = 0; f < num_functions_; ++f) {
    for (std::size_t i = 0; i < n; ++i) values[f * n + i] = (*this)(f, sample[i]);
  }
  return {num_functions_, n, std::move(values), range_lo_, range_hi_, names_};
}

std::optional<TabulatedClass> TabulatedClass::subset(std::span<const std::size_t> rows) const {
  if (rows.empty()) return std::nullopt;
  std::vector<double> values;
  values.reserve(rows.size() * num_points_);
  std::vector<std::string> names;
  names.reserve(rows.size());
  for (std::size_t f : rows) {
    if (f >= num_functions_) throw DimensionError("row index outside class");
    const auto r = row(f);
    values.insert(values.end(), r.begin(), r.end());
    names.push_back(names_[f]);
  }
  return TabulatedClass(rows.size(), num_points_, std::move(values), range_lo_, range_hi_,
                        std::move(names));
}

TabulatedClass TabulatedClass::scaled(double c) const {
  std::vector<double> values(values_.size());
  std::transform(values_.begin(), values_.end(), values.begin(), [c](double v) { return c * v; });
  const double a = c * range_lo_;
  const double b = c * range_hi_;
  return {num_functions_, num_points_, std::move(values), std::min(a, b), std::max(a, b), names_};
}

TabulatedClass TabulatedClass::with_zero() const {
  std::vector<double> values = values_;
  values.insert(values.end(), num_points_, 0.0);
  std::vector<std::string> names = names_;
  names.emplace_back("zero");
  return {num_functions_ + 1,        num_points_,
          std::move(values),         std::min(range_lo_, 0.0),
          std::max(range_hi_, 0.0),  std::move(names)};
}

// ---------------------------------------------------------------------------
// SigmaVector / StarHullSpec

SigmaVector::SigmaVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw PreconditionError("Rademacher signs must be -1 or +1");
  }
}

SigmaVector SigmaVector::from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<int> signs(n);
  for (std::size_t i = 0; i < n; ++i) signs[i] = ((mask >> i) & 1U) != 0 ? 1 : -1;
  return SigmaVector(std::move(signs));
}

StarHullSpec::StarHullSpec(TabulatedClass base_class, std::vector<double> center_values)
    : base(std::move(base_class)), center(std::move(center_values)) {
  require_length(center.size(), base.num_points(), "star-hull center");
  for (double v : center) {
    if (v < base.range_lo() || v > base.range_hi()) {
      throw PreconditionError("star-hull center leaves the class range");
    }
  }
}

// ---------------------------------------------------------------------------
// Functionals

double true_mean(const DiscreteDistribution& dist, std::span<const double> f) {
  require_length(f.size(), dist.size(), "true_mean");
  const auto masses = dist.masses();
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += masses[i] * f[i];
  return total;
}

double variance(const DiscreteDistribution& dist, std::span<const double> f) {
  require_length(f.size(), dist.size(), "variance");
  const auto masses = dist.masses();
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mean += masses[i] * f[i];
    second += masses[i] * f[i] * f[i];
  }
  return std::max(0.0, second - mean * mean);
}

double sample_mean(std::span<const double> values_on_sample) {
  if (values_on_sample.empty()) throw PreconditionError("empirical mean of an empty sample");
  double total = 0.0;
  for (double v : values_on_sample) total += v;
  return total / static_cast<double>(values_on_sample.size());
}

double empirical_mean(const SampleSet& sample, std::span<const double> f_over_points) {
  require_length(f_over_points.size(), sample.num_points(), "empirical_mean");
  double total = 0.0;
  for (std::size_t idx : sample.indices()) total += f_over_points[idx];
  return total / static_cast<double>(sample.n());
}

double rademacher_sum(const SigmaVector& sigma, std::span<const double> values_on_sample) {
  require_length(values_on_sample.size(), sigma.size(), "rademacher_sum");
  if (sigma.size() == 0) throw PreconditionError("Rademacher sum over an empty sample");
  double total = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) total += sigma[i] * values_on_sample[i];
  return total / static_cast<double>(sigma.size());
}

double rademacher_sum(const SampleSet& sample, const SigmaVector& sigma,
                      std::span<const double> f_over_points) {
  require_length(sigma.size(), sample.n(), "rademacher_sum signs");
  require_length(f_over_points.size(), sample.num_points(), "rademacher_sum");
  double total = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) total += sigma[i] * f_over_points[sample[i]];
  return total / static_cast<double>(sample.n());
}

std::vector<double> functional_values(const TabulatedClass& cls, const SampleSet& sample,
                                      const DiscreteDistribution& dist, Functional functional) {
  require_length(cls.num_points(), dist.size(), "class ground space");
  std::vector<double> out(cls.num_functions());
  std::vector<double> squared(cls.num_points());
  for (std::size_t f = 0; f < cls.num_functions(); ++f) {
    const auto row = cls.row(f);
    switch (functional) {
      case Functional::pn_mean:
        out[f] = empirical_mean(sample, row);
        break;
      case Functional::pn_sq:
      case Functional::p_sq:
        std::transform(row.begin(), row.end(), squared.begin(), [](double v) { return v * v; });
        out[f] = functional == Functional::pn_sq ? empirical_mean(sample, squared)
                                                 : true_mean(dist, squared);
        break;
    }
  }
  return out;
}

std::vector<std::size_t> localized_indices(const TabulatedClass& cls, const SampleSet& sample,
                                           const DiscreteDistribution& dist,
                                           Functional functional, double r) {
  if (!(r >= 0.0)) throw PreconditionError("localization radius must be nonnegative");
  const auto t = functional_values(cls, sample, dist, functional);
  std::vector<std::size_t> rows;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f] <= r) rows.push_back(f);
  }
  return rows;
}

std::optional<TabulatedClass> localized_subclass(const TabulatedClass& cls,
                                                 const SampleSet& sample,
                                                 const DiscreteDistribution& dist,
                                                 Functional functional, double r) {
  return cls.subset(localized_indices(cls, sample, dist, functional, r));
}

}  // namespace locrad
