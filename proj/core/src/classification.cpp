#include "locrad/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "locrad/error.hpp"
#include "locrad/parallel.hpp"

namespace locrad {

namespace {

void check_labels(const std::vector<int>& ys) {
  for (int y : ys) {
    if (y != 1 && y != -1) throw PreconditionError("labels must be -1 or +1");
  }
}

void check_binary(const TabulatedClass& cls) {
  for (double v : cls.values()) {
    if (v != 1.0 && v != -1.0) throw PreconditionError("predictor values must be exactly -1 or +1");
  }
}

std::string feature_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::size_t> sorted_positions(const std::vector<double>& features) {
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return features[a] < features[b]; });
  return order;
}

std::vector<std::size_t> valid_cuts(const std::vector<double>& features,
                                    const std::vector<std::size_t>& order) {
  const std::size_t n = features.size();
  std::vector<std::size_t> cuts;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k == 0 || k == n || features[order[k - 1]] < features[order[k]]) cuts.push_back(k);
  }
  return cuts;
}

}  // namespace

LabeledSample::LabeledSample(std::vector<std::string> xs, std::vector<int> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw DimensionError("labeled sample has " + std::to_string(xs_.size()) + " points and " +
                         std::to_string(ys_.size()) + " labels");
  }
  if (ys_.empty()) throw PreconditionError("labeled sample must not be empty");
  check_labels(ys_);
}

LabeledSample LabeledSample::from_features(std::vector<double> features, std::vector<int> ys) {
  std::vector<std::string> xs;
  xs.reserve(features.size());
  for (double v : features) {
    if (!std::isfinite(v)) throw PreconditionError("features must be finite");
    xs.push_back(feature_text(v));
  }
  LabeledSample out(std::move(xs), std::move(ys));
  out.features_ = std::move(features);
  return out;
}

SampleSet LabeledSample::to_sample(const DiscreteDistribution& dist) const {
  std::vector<std::size_t> idx;
  idx.reserve(xs_.size());
  for (const auto& id : xs_) idx.push_back(dist.index_of(id));
  return SampleSet(std::move(idx), dist.size());
}

ErmOracle ErmOracle::finite_class(TabulatedClass predictors_on_sample) {
  check_binary(predictors_on_sample);
  ErmOracle oracle(Kind::finite_class, predictors_on_sample.num_points());
  oracle.predictors_.emplace(std::move(predictors_on_sample));
  return oracle;
}

ErmOracle ErmOracle::threshold_stumps(std::vector<double> features) {
  if (features.empty()) throw PreconditionError("stumps need at least one feature value");
  ErmOracle oracle(Kind::threshold_stumps, features.size());
  oracle.predictors_.emplace(stump_dictionary(features));
  oracle.sorted_ = sorted_positions(features);
  oracle.cuts_ = valid_cuts(features, oracle.sorted_);
  oracle.features_ = std::move(features);
  return oracle;
}

TabulatedClass stump_dictionary(const std::vector<double>& features) {
  const std::size_t n = features.size();
  if (n == 0) throw PreconditionError("stumps need at least one feature value");
  for (double v : features) {
    if (!std::isfinite(v)) throw PreconditionError("features must be finite");
  }
  const auto order = sorted_positions(features);
  const auto cuts = valid_cuts(features, order);
  std::vector<double> values;
  std::vector<std::string> names;
  values.reserve(2 * cuts.size() * n);
  for (std::size_t k : cuts) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[order[j]] = j < k ? -1.0 : 1.0;
    values.insert(values.end(), row.begin(), row.end());
    for (double& v : row) v = -v;
    values.insert(values.end(), row.begin(), row.end());
    names.push_back("cut" + std::to_string(k) + "+");
    names.push_back("cut" + std::to_string(k) + "-");
  }
  return TabulatedClass(2 * cuts.size(), n, std::move(values), -1.0, 1.0, std::move(names));
}

ErmResult ErmOracle::minimize(const WeightedErmProblem& problem) const {
  if (problem.weights.size() != n_ || problem.targets.size() != n_) {
    throw DimensionError("weighted ERM problem must have " + std::to_string(n_) + " entries");
  }
  for (double w : problem.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError("weights must be finite and >= 0");
  }
  check_labels(problem.targets);
  const double n = static_cast<double>(n_);
  ErmResult best;
  best.value = std::numeric_limits<double>::infinity();
  if (kind_ == Kind::finite_class) {
    const TabulatedClass& cls = *predictors_;
    for (std::size_t f = 0; f < cls.num_functions(); ++f) {
      const auto row = cls.row(f);
      double cost = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (row[i] != static_cast<double>(problem.targets[i])) cost += problem.weights[i];
      }
      if (cost / n < best.value) {
        best.value = cost / n;
        best.index = f;
      }
    }
    best.name = cls.name(best.index);
    return best;
  }
  // Prefix sums over the sorted order: plus_w = weight on +1 targets,
  // minus_w = weight on -1 targets.
  std::vector<double> plus_w(n_ + 1, 0.0), minus_w(n_ + 1, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t i = sorted_[j];
    plus_w[j + 1] = plus_w[j] + (problem.targets[i] == 1 ? problem.weights[i] : 0.0);
    minus_w[j + 1] = minus_w[j] + (problem.targets[i] == -1 ? problem.weights[i] : 0.0);
  }
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    const std::size_t k = cuts_[c];
    // (k, +): -1 below the cut, +1 from the cut on.
    const double up = plus_w[k] + (minus_w[n_] - minus_w[k]);
    const double down = minus_w[k] + (plus_w[n_] - plus_w[k]);
    if (up / n < best.value) {
      best.value = up / n;
      best.index = 2 * c;
    }
    if (down / n < best.value) {
      best.value = down / n;
      best.index = 2 * c + 1;
    }
  }
  best.name = predictors_->name(best.index);
  return best;
}

ErmResult weighted_erm(const ErmOracle& oracle, const WeightedErmProblem& problem) {
  return oracle.minimize(problem);
}

TabulatedClass discrete_loss_table(const TabulatedClass& predictors_on_sample,
                                   const std::vector<int>& ys) {
  check_binary(predictors_on_sample);
  check_labels(ys);
  const std::size_t n = predictors_on_sample.num_points();
  if (ys.size() != n) throw DimensionError("need one label per sample position");
  std::vector<double> values(predictors_on_sample.num_functions() * n);
  for (std::size_t f = 0; f < predictors_on_sample.num_functions(); ++f) {
    const auto row = predictors_on_sample.row(f);
    for (std::size_t i = 0; i < n; ++i) {
      values[f * n + i] = row[i] != static_cast<double>(ys[i]) ? 1.0 : 0.0;
    }
  }
  std::vector<std::string> names(predictors_on_sample.names().begin(),
                                 predictors_on_sample.names().end());
  return TabulatedClass(predictors_on_sample.num_functions(), n, std::move(values), 0.0, 1.0,
                        std::move(names));
}

Lemma64Result lemma64_identity(const TabulatedClass& predictors_on_sample,
                               const std::vector<int>& ys, double b, std::size_t cap) {
  if (!(b >= 0.0 && b <= 1.0)) throw PreconditionError("b must lie in [0, 1]");
  const TabulatedClass loss = discrete_loss_table(predictors_on_sample, ys);
  const std::size_t n = loss.num_points();
  if (n > cap || n >= 63) throw CapacityError("identity check enumerates 2^n signs; n too large");
  const double nn = static_cast<double>(n);
  std::vector<std::size_t> members;
  for (std::size_t f = 0; f < loss.num_functions(); ++f) {
    const auto row = loss.row(f);
    if (std::accumulate(row.begin(), row.end(), 0.0) / nn <= b) members.push_back(f);
  }
  Lemma64Result out;
  if (members.empty()) {
    out.empty = true;
    return out;
  }
  const std::size_t count = std::size_t{1} << n;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    const SigmaVector sigma = SigmaVector::from_mask(n, s);
    double best_sup = -std::numeric_limits<double>::infinity();
    double best_min = std::numeric_limits<double>::infinity();
    for (std::size_t f : members) {
      best_sup = std::max(best_sup, rademacher_sum(sigma, loss.row(f)));
      const auto pred = predictors_on_sample.row(f);
      double miss = 0.0;
      for (std::size_t i = 0; i < n; ++i) miss += pred[i] != static_cast<double>(sigma[i]) ? 1.0 : 0.0;
      best_min = std::min(best_min, miss / nn);
    }
    lhs += best_sup;
    rhs += best_min;
  }
  out.lhs = lhs / static_cast<double>(count);
  out.rhs = 0.5 - rhs / static_cast<double>(count);
  return out;
}

double j_of_mu(const ErmOracle& oracle, const std::vector<int>& ys, const SigmaVector& sigma,
               double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw PreconditionError("mu must be finite and >= 0");
  const std::size_t n = oracle.n();
  if (ys.size() != n || sigma.size() != n) throw DimensionError("labels, signs and sample disagree");
  check_labels(ys);
  WeightedErmProblem problem;
  problem.weights.resize(n);
  problem.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = sigma[i] + mu * ys[i];
    problem.weights[i] = std::abs(z);
    problem.targets[i] = z >= 0.0 ? 1 : -1;
  }
  return oracle.minimize(problem).value;
}

std::vector<double> default_mu_grid(std::size_t points) {
  std::vector<double> grid{0.0};
  const auto geo = geometric_grid(std::ldexp(1.0, -10), std::ldexp(1.0, 7), points);
  grid.insert(grid.end(), geo.begin(), geo.end());
  return grid;
}

Thm63Result thm63_psi_hat_upper(const ErmOracle& oracle, const std::vector<int>& ys, double r,
                                double x, const SigmaPlan& plan,
                                const std::vector<double>& mu_grid,
                                const std::vector<double>& alpha_points) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("r must be finite and >= 0");
  if (!(x > 0.0)) throw PreconditionError("x must be > 0");
  if (mu_grid.empty()) throw PreconditionError("mu grid must not be empty");
  for (double mu : mu_grid) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw PreconditionError("mu grid must lie in [0, inf)");
  }
  std::vector<double> alphas = alpha_points.empty() ? std::vector<double>{1.0} : alpha_points;
  if (!std::is_sorted(alphas.begin(), alphas.end()) || alphas.front() <= 0.0 || alphas.back() > 1.0) {
    throw PreconditionError("alpha grid must be increasing within (0, 1]");
  }
  const std::size_t n = oracle.n();
  if (ys.size() != n) throw DimensionError("need one label per sample position");
  check_labels(ys);

  std::size_t count = 0;
  if (plan.method == RademacherMethod::exact_enumeration) {
    if (n > plan.cap || n >= 63) throw CapacityError("exact sign enumeration needs n <= cap");
    count = std::size_t{1} << n;
  } else {
    if (plan.draws == 0) throw PreconditionError("Monte Carlo needs at least one sign draw");
    count = plan.draws;
  }

  const std::size_t K = alphas.size();
  std::vector<double> slope(K);
  for (std::size_t k = 0; k < K; ++k) slope[k] = 2.0 * r / (alphas[k] * alphas[k]) - 0.5;

  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<std::vector<double>> sums(chunks, std::vector<double>(K, 0.0));
  std::vector<std::vector<double>> sums_sq(chunks, std::vector<double>(K, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> offset(mu_grid.size());
    for (std::size_t s = c * chunk; s < std::min(count, (c + 1) * chunk); ++s) {
      const SigmaVector sigma = plan.method == RademacherMethod::exact_enumeration
                                    ? SigmaVector::from_mask(n, s)
                                    : monte_carlo_sigma(n, plan.seed, s);
      for (std::size_t j = 0; j < mu_grid.size(); ++j) {
        const double mu = mu_grid[j];
        double spread = 0.0;
        for (std::size_t i = 0; i < n; ++i) spread += std::abs(sigma[i] + mu * ys[i]);
        offset[j] = spread / (2.0 * static_cast<double>(n)) - j_of_mu(oracle, ys, sigma, mu);
      }
      for (std::size_t k = 0; k < K; ++k) {
        double inner = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < mu_grid.size(); ++j) {
          inner = std::min(inner, slope[k] * mu_grid[j] + offset[j]);
        }
        sums[c][k] += inner;
        sums_sq[c][k] += inner * inner;
      }
    }
  });

  std::vector<double> mean(K, 0.0), se(K, 0.0);
  const double cnt = static_cast<double>(count);
  for (std::size_t k = 0; k < K; ++k) {
    double s = 0.0, ss = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
      s += sums[c][k];
      ss += sums_sq[c][k];
    }
    mean[k] = s / cnt;
    if (plan.method == RademacherMethod::monte_carlo && count > 1) {
      se[k] = std::sqrt(std::max(0.0, (ss - s * mean[k]) / (cnt - 1.0)) / cnt);
    }
  }

  // G(alpha) = E_sigma min_mu (...) is nonincreasing in alpha, so on
  // [alpha_k, alpha_{k+1}] the product alpha G(alpha) is at most
  // max(alpha_k G_k, alpha_{k+1} G_k).
  Thm63Result out;
  out.complexity = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    const double hi = k + 1 < K ? alphas[k + 1] : alphas[k];
    const double v = std::max(alphas[k] * mean[k], hi * mean[k]);
    if (v > out.complexity) {
      out.complexity = v;
      out.std_error = std::max(alphas[k], hi) * se[k];
      out.best_alpha = alphas[k];
    }
  }
  if (r == 0.0) out.complexity = std::max(out.complexity, 0.0);
  out.value = kThm63Multiplier * out.complexity + 26.0 * x / static_cast<double>(n);
  out.method = plan.method;
  out.num_sigma = count;
  return out;
}

Thm63Result thm63_psi_hat_upper(const ErmOracle& oracle, const std::vector<int>& ys, double r,
                                double x, std::uint64_t seed) {
  return thm63_psi_hat_upper(oracle, ys, r, x,
                             SigmaPlan::automatic(oracle.n(), kThm63SigmaDraws, seed),
                             default_mu_grid(), alpha_grid(r));
}

SubRootEvaluator cor62_psi_hat(const TabulatedClass& loss_on_sample, double x,
                               const SigmaPlan& plan) {
  if (!(x > 0.0)) throw PreconditionError("x must be > 0");
  auto local = std::make_shared<const LossLocalComplexity>(loss_on_sample, plan);
  const double additive = 26.0 * x / static_cast<double>(loss_on_sample.num_points());
  return SubRootEvaluator([local, additive](double r) {
    return kThm63Multiplier * local->alpha_sup(r) + additive;
  });
}

Cor62Result cor62_bound(const ErmOracle& oracle, const std::vector<int>& ys, double x, double K,
                        std::uint64_t seed, std::optional<double> c) {
  if (!(K > 1.0)) throw PreconditionError("K must be > 1");
  const TabulatedClass loss = discrete_loss_table(oracle.predictors(), ys);
  const SigmaPlan plan = SigmaPlan::automatic(oracle.n(), kThm63SigmaDraws, seed);
  const SubRootEvaluator psi = cor62_psi_hat(loss, x, plan);
  Cor62Result out;
  out.fixed_point = solve_fixed_point(psi, 1.0);
  BoundParams p;
  p.n = oracle.n();
  p.x = x;
  p.K = K;
  out.report = classification_bound_cor62(p, out.fixed_point.r_star, c);
  return out;
}

}  // namespace locrad
