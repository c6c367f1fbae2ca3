#include "locrad/rademacher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "locrad/error.hpp"
#include "locrad/parallel.hpp"
#include "locrad/rng.hpp"

namespace locrad {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kMaterializeLimit = std::size_t{1} << 24;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

SigmaMean finish(const std::vector<Moments>& parts, bool with_error) {
  Moments total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.count += p.count;
  }
  SigmaMean out;
  if (total.count == 0) return out;
  const double count = static_cast<double>(total.count);
  out.mean = total.sum / count;
  if (with_error && total.count > 1) {
    const double var = std::max(0.0, (total.sum_sq - total.sum * out.mean) / (count - 1.0));
    out.std_error = std::sqrt(var / count);
  }
  return out;
}

double mean_and_error(std::span<const double> values, double& std_error) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  std_error = 0.0;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return mean;
}

void check_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("radius r must be finite and >= 0");
}

}  // namespace

std::string to_string(RademacherMethod method) {
  return method == RademacherMethod::exact_enumeration ? "exact" : "monte_carlo";
}

SigmaPlan SigmaPlan::exact(std::size_t cap) {
  SigmaPlan plan;
  plan.method = RademacherMethod::exact_enumeration;
  plan.cap = cap;
  return plan;
}

SigmaPlan SigmaPlan::monte_carlo(std::size_t draws, std::uint64_t seed) {
  SigmaPlan plan;
  plan.method = RademacherMethod::monte_carlo;
  plan.draws = draws;
  plan.seed = seed;
  return plan;
}

SigmaPlan SigmaPlan::automatic(std::size_t n, std::size_t draws, std::uint64_t seed,
                               std::size_t cap) {
  return n <= cap ? exact(cap) : monte_carlo(draws, seed);
}

SigmaVector monte_carlo_sigma(std::size_t n, std::uint64_t seed, std::size_t s) {
  CounterRng rng(seed, s);
  std::vector<int> signs(n);
  for (auto& v : signs) v = rng.sign();
  return SigmaVector(std::move(signs));
}

SigmaProjections::SigmaProjections(const TabulatedClass& on_sample, const SigmaPlan& plan,
                                   std::optional<std::vector<double>> center)
    : n_(on_sample.num_points()), m_(on_sample.num_functions()), count_(0), plan_(plan) {
  if (plan.method == RademacherMethod::exact_enumeration) {
    if (n_ > plan.cap || n_ >= 63) {
      throw CapacityError("exact enumeration of 2^" + std::to_string(n_) +
                          " sign vectors exceeds the cap n <= " + std::to_string(plan.cap) +
                          "; use Monte Carlo");
    }
    count_ = std::size_t{1} << n_;
  } else {
    if (plan.draws == 0) throw PreconditionError("Monte Carlo needs at least one sign draw");
    count_ = plan.draws;
  }
  table_.assign(on_sample.values().begin(), on_sample.values().end());
  if (center) {
    if (center->size() != n_) {
      throw DimensionError("center has " + std::to_string(center->size()) + " values, sample has " +
                           std::to_string(n_));
    }
    center_ = *center;
    table_.insert(table_.end(), center_.begin(), center_.end());
  } else {
    table_.insert(table_.end(), n_, 0.0);
  }

  const std::size_t width = m_ + 1;
  if (count_ <= kMaterializeLimit / width) {
    projections_.resize(count_ * width);
    const std::size_t chunks = (count_ + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(count_, begin + kChunk);
      double* out = projections_.data() + begin * width;
      // Fill chunk rows via the same generator the streaming path uses.
      std::vector<double> proj(width);
      std::uint64_t gray = 0;
      for (std::size_t s = begin; s < end; ++s) {
        if (plan_.method == RademacherMethod::monte_carlo) {
          const SigmaVector sigma = monte_carlo_sigma(n_, plan_.seed, s);
          for (std::size_t f = 0; f < width; ++f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n_; ++i) acc += sigma[i] * table_[f * n_ + i];
            proj[f] = acc / static_cast<double>(n_);
          }
        } else if (s == begin) {
          gray = s ^ (s >> 1);
          for (std::size_t f = 0; f < width; ++f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
              acc += (((gray >> i) & 1U) != 0 ? 1.0 : -1.0) * table_[f * n_ + i];
            }
            proj[f] = acc / static_cast<double>(n_);
          }
        } else {
          const auto bit = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(s)));
          gray ^= std::uint64_t{1} << bit;
          const double step = (((gray >> bit) & 1U) != 0 ? 2.0 : -2.0) / static_cast<double>(n_);
          for (std::size_t f = 0; f < width; ++f) proj[f] += step * table_[f * n_ + bit];
        }
        std::copy(proj.begin(), proj.end(), out + (s - begin) * width);
      }
    });
    materialized_ = true;
  }
}

template <class Visitor>
void SigmaProjections::visit(Visitor&& visitor) const {
  // visitor(chunk, row span); chunks may run concurrently, rows within a
  // chunk arrive in order.
  const std::size_t width = m_ + 1;
  const std::size_t chunks = (count_ + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(count_, begin + kChunk);
    if (materialized_) {
      for (std::size_t s = begin; s < end; ++s) {
        visitor(c, std::span<const double>(projections_.data() + s * width, width));
      }
      return;
    }
    // Streaming exact enumeration (Monte Carlo tables always fit).
    std::vector<double> proj(width);
    std::uint64_t gray = begin ^ (begin >> 1);
    for (std::size_t f = 0; f < width; ++f) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        acc += (((gray >> i) & 1U) != 0 ? 1.0 : -1.0) * table_[f * n_ + i];
      }
      proj[f] = acc / static_cast<double>(n_);
    }
    visitor(c, std::span<const double>(proj));
    for (std::size_t s = begin + 1; s < end; ++s) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(s)));
      gray ^= std::uint64_t{1} << bit;
      const double step = (((gray >> bit) & 1U) != 0 ? 2.0 : -2.0) / static_cast<double>(n_);
      for (std::size_t f = 0; f < width; ++f) proj[f] += step * table_[f * n_ + bit];
      visitor(c, std::span<const double>(proj));
    }
  });
}

template <class PerSigma>
SigmaMean SigmaProjections::reduce(PerSigma&& per_sigma) const {
  std::vector<Moments> parts((count_ + kChunk - 1) / kChunk);
  visit([&](std::size_t c, std::span<const double> proj) {
    const double v = per_sigma(proj);
    parts[c].sum += v;
    parts[c].sum_sq += v * v;
    ++parts[c].count;
  });
  return finish(parts, plan_.method == RademacherMethod::monte_carlo);
}

SigmaMean SigmaProjections::supremum(std::span<const std::size_t> members) const {
  if (members.empty()) return {};
  for (auto f : members) {
    if (f >= m_) throw DimensionError("member index " + std::to_string(f) + " out of range");
  }
  return reduce([&](std::span<const double> proj) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto f : members) best = std::max(best, proj[f]);
    return best;
  });
}

SigmaMean SigmaProjections::supremum() const {
  std::vector<std::size_t> all(m_);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return supremum(all);
}

SigmaMean SigmaProjections::star_hull(std::span<const double> q, double r) const {
  check_radius(r);
  if (q.size() != m_) throw DimensionError("need one squared distance per function");
  std::vector<double> alpha(m_);
  for (std::size_t f = 0; f < m_; ++f) {
    if (!(q[f] >= 0.0)) throw PreconditionError("squared distances must be >= 0");
    alpha[f] = q[f] == 0.0 ? 1.0 : std::min(1.0, std::sqrt(r / q[f]));
  }
  return reduce([&](std::span<const double> proj) {
    const double c = proj[m_];
    double best = 0.0;
    for (std::size_t f = 0; f < m_; ++f) best = std::max(best, alpha[f] * (proj[f] - c));
    return c + best;
  });
}

RademacherEstimate SigmaProjections::estimate(const SigmaMean& mean) const {
  RademacherEstimate est;
  est.value = mean.mean;
  est.std_error = mean.std_error;
  est.method = plan_.method;
  est.num_sigma_draws = count_;
  est.num_data_draws = 1;
  est.seed = plan_.method == RademacherMethod::monte_carlo ? plan_.seed : 0;
  return est;
}

ExpectedProjections::ExpectedProjections(const TabulatedClass& cls,
                                         const DiscreteDistribution& dist, std::size_t n,
                                         std::size_t data_draws, const SigmaPlan& inner,
                                         std::uint64_t seed)
    : n_(n), seed_(seed), inner_(inner) {
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  if (data_draws == 0) throw PreconditionError("need at least one data draw");
  if (cls.num_points() != dist.size()) {
    throw DimensionError("class has " + std::to_string(cls.num_points()) +
                         " columns, distribution has " + std::to_string(dist.size()) + " points");
  }
  if (inner.method == RademacherMethod::exact_enumeration && n > inner.cap) {
    throw CapacityError("exact inner enumeration needs n <= " + std::to_string(inner.cap));
  }
  std::vector<std::optional<SampleSet>> samples(data_draws);
  std::vector<std::optional<SigmaProjections>> projections(data_draws);
  // Sample drawing is cheap; projections are built serially per draw but each
  // build is itself chunk-parallel.
  for (std::size_t d = 0; d < data_draws; ++d) {
    samples[d].emplace(dist.sample(n, derive_seed(seed, 2 * d)));
    SigmaPlan plan = inner;
    if (plan.method == RademacherMethod::monte_carlo) plan.seed = derive_seed(seed, 2 * d + 1);
    projections[d].emplace(cls.on_sample(*samples[d]), plan);
  }
  for (std::size_t d = 0; d < data_draws; ++d) {
    samples_.push_back(std::move(*samples[d]));
    projections_.push_back(std::move(*projections[d]));
  }
}

template <class PerSample>
RademacherEstimate ExpectedProjections::average(PerSample&& per_sample) const {
  std::vector<double> values(projections_.size());
  double inner_error = 0.0;
  for (std::size_t d = 0; d < projections_.size(); ++d) {
    const SigmaMean m = per_sample(projections_[d]);
    values[d] = m.mean;
    inner_error = m.std_error;
  }
  RademacherEstimate est;
  est.value = mean_and_error(values, est.std_error);
  if (values.size() == 1) est.std_error = inner_error;
  est.method = projections_.front().plan().method;
  est.num_sigma_draws = projections_.front().num_sigma();
  est.num_data_draws = projections_.size();
  est.seed = seed_;
  return est;
}

RademacherEstimate ExpectedProjections::supremum(std::span<const std::size_t> members) const {
  return average([&](const SigmaProjections& p) { return p.supremum(members); });
}

RademacherEstimate ExpectedProjections::supremum() const {
  return average([&](const SigmaProjections& p) { return p.supremum(); });
}

RademacherEstimate ExpectedProjections::star_hull_true(std::span<const double> q, double r) const {
  return average([&](const SigmaProjections& p) { return p.star_hull(q, r); });
}

RademacherEstimate conditional_rademacher_exact(const TabulatedClass& on_sample, std::size_t cap) {
  const SigmaProjections proj(on_sample, SigmaPlan::exact(cap));
  return proj.estimate(proj.supremum());
}

RademacherEstimate conditional_rademacher_exact(const TabulatedClass& cls, const SampleSet& sample,
                                                std::size_t cap) {
  return conditional_rademacher_exact(cls.on_sample(sample), cap);
}

RademacherEstimate conditional_rademacher_mc(const TabulatedClass& on_sample, std::size_t draws,
                                             std::uint64_t seed) {
  const SigmaProjections proj(on_sample, SigmaPlan::monte_carlo(draws, seed));
  return proj.estimate(proj.supremum());
}

RademacherEstimate conditional_rademacher_mc(const TabulatedClass& cls, const SampleSet& sample,
                                             std::size_t draws, std::uint64_t seed) {
  return conditional_rademacher_mc(cls.on_sample(sample), draws, seed);
}

RademacherEstimate expected_rademacher(const TabulatedClass& cls, const DiscreteDistribution& dist,
                                       std::size_t n, std::size_t data_draws,
                                       const SigmaPlan& inner, std::uint64_t seed) {
  return ExpectedProjections(cls, dist, n, data_draws, inner, seed).supremum();
}

RademacherEstimate star_hull_local_conditional(const TabulatedClass& on_sample,
                                               std::span<const double> center, double r,
                                               const SigmaPlan& plan) {
  check_radius(r);
  const std::size_t n = on_sample.num_points();
  if (center.size() != n) throw DimensionError("center must have one value per sample position");
  std::vector<double> q(on_sample.num_functions());
  for (std::size_t f = 0; f < q.size(); ++f) {
    const auto row = on_sample.row(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (row[i] - center[i]) * (row[i] - center[i]);
    q[f] = acc / static_cast<double>(n);
  }
  const SigmaProjections proj(on_sample, plan, std::vector<double>(center.begin(), center.end()));
  return proj.estimate(proj.star_hull(q, r));
}

std::vector<double> alpha_grid(double r, std::size_t points) {
  check_radius(r);
  if (r == 0.0) return {};
  const double lo = std::sqrt(2.0 * r);
  if (lo >= 1.0 || points < 2) return {1.0};
  std::vector<double> grid(points);
  const double log_lo = std::log(lo);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = std::exp(log_lo * (1.0 - static_cast<double>(k) / static_cast<double>(points - 1)));
  }
  grid.front() = lo;
  grid.back() = 1.0;
  return grid;
}

LossLocalComplexity::LossLocalComplexity(const TabulatedClass& loss_on_sample,
                                         const SigmaPlan& plan)
    : projections_(loss_on_sample, plan) {
  for (double v : loss_on_sample.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("loss values must lie in [0, 1]");
  }
  const std::size_t m = loss_on_sample.num_functions();
  const std::size_t n = loss_on_sample.num_points();
  mean_.resize(m);
  mean_sq_.resize(m);
  for (std::size_t f = 0; f < m; ++f) {
    double a = 0.0, b = 0.0;
    for (double v : loss_on_sample.row(f)) {
      a += v;
      b += v * v;
    }
    mean_[f] = a / static_cast<double>(n);
    mean_sq_[f] = b / static_cast<double>(n);
  }
  order_.resize(m);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return mean_[a] < mean_[b]; });
  prefix_sup_.resize(m + 1);
  for (std::size_t k = 1; k <= m; ++k) {
    prefix_sup_[k] = projections_.supremum(std::span<const std::size_t>(order_.data(), k));
  }
}

SigmaMean LossLocalComplexity::phi(double s) const {
  std::size_t k = 0;
  while (k < order_.size() && mean_[order_[k]] <= s) ++k;
  return prefix_sup_[k];
}

std::pair<SigmaMean, double> LossLocalComplexity::alpha_sup_detail(double r) const {
  check_radius(r);
  const double s0 = 2.0 * r;
  SigmaMean best = phi(s0);
  double best_alpha = 1.0;
  if (s0 < 1.0) {
    for (std::size_t f : order_) {
      const double s = mean_[f];
      if (!(s > s0) || s > 1.0) continue;
      const double alpha = std::sqrt(s0 / s);
      const SigmaMean at = phi(s);
      if (alpha * at.mean > best.mean) {
        best = {alpha * at.mean, alpha * at.std_error};
        best_alpha = alpha;
      }
    }
  }
  return {best, best_alpha};
}

double LossLocalComplexity::alpha_sup(double r) const { return alpha_sup_detail(r).first.mean; }

double LossLocalComplexity::star(double r) const {
  check_radius(r);
  return projections_.star_hull(mean_sq_, 2.0 * r).mean;
}

LossStarHullResult LossLocalComplexity::evaluate(double r) const {
  const auto [sup, alpha] = alpha_sup_detail(r);
  const SigmaMean star_mean = projections_.star_hull(mean_sq_, 2.0 * r);
  LossStarHullResult out;
  out.alpha_sup_value = sup.mean;
  out.best_alpha = alpha;
  out.star_value = star_mean.mean;
  out.estimate = projections_.estimate(star_mean.mean >= sup.mean ? star_mean : sup);
  return out;
}

LossStarHullResult loss_star_hull_local_conditional(const TabulatedClass& loss_on_sample, double r,
                                                    const SigmaPlan& plan) {
  return LossLocalComplexity(loss_on_sample, plan).evaluate(r);
}

RademacherEstimate expected_uniform_deviation(const TabulatedClass& cls,
                                              const DiscreteDistribution& dist, std::size_t n,
                                              std::size_t data_draws, std::uint64_t seed,
                                              bool upper) {
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  if (data_draws == 0) throw PreconditionError("need at least one data draw");
  if (cls.num_points() != dist.size()) throw DimensionError("class and distribution disagree");
  const std::size_t m = cls.num_functions();
  std::vector<double> truth(m);
  for (std::size_t f = 0; f < m; ++f) truth[f] = true_mean(dist, cls.row(f));
  std::vector<double> values(data_draws);
  parallel_for(data_draws, [&](std::size_t d) {
    const SampleSet sample = dist.sample(n, derive_seed(seed, 2 * d));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < m; ++f) {
      const double gap = truth[f] - empirical_mean(sample, cls.row(f));
      best = std::max(best, upper ? gap : -gap);
    }
    values[d] = best;
  });
  RademacherEstimate est;
  est.value = mean_and_error(values, est.std_error);
  est.method = RademacherMethod::monte_carlo;
  est.num_sigma_draws = 0;
  est.num_data_draws = data_draws;
  est.seed = seed;
  return est;
}

}  // namespace locrad
