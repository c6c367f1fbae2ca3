#include "locrad/subroot.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "locrad/error.hpp"

namespace locrad {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw PreconditionError("grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw PreconditionError("grid points must be finite and positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw PreconditionError("grid must be strictly increasing");
    }
  }
}

}  // namespace

SubRootEvaluator::SubRootEvaluator(Fn fn, double domain_lo, double mc_tolerance)
    : fn_(std::move(fn)), domain_lo_(domain_lo), mc_tolerance_(mc_tolerance) {
  if (!fn_) throw PreconditionError("evaluator needs a function");
  if (!(domain_lo >= 0.0)) throw PreconditionError("domain_lo must be >= 0");
  if (!(mc_tolerance >= 0.0)) throw PreconditionError("mc_tolerance must be >= 0");
}

double SubRootEvaluator::operator()(double r) const {
  if (!(r >= domain_lo_) || !std::isfinite(r)) {
    throw PreconditionError("r = " + std::to_string(r) + " is outside the evaluator domain");
  }
  return fn_(r);
}

SubRootEvaluator SubRootEvaluator::sqrt_affine(double a, double c) {
  if (!(a >= 0.0) || !(c >= 0.0)) throw PreconditionError("a sqrt(r) + c needs a, c >= 0");
  return SubRootEvaluator([a, c](double r) { return a * std::sqrt(r) + c; });
}

SubRootEvaluator SubRootEvaluator::tabulated(std::vector<double> grid, std::vector<double> values) {
  check_grid(grid);
  if (values.size() != grid.size()) throw DimensionError("need one value per grid point");
  std::vector<double> ratio(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(values[i] >= 0.0)) throw PreconditionError("tabulated values must be nonnegative");
    ratio[i] = values[i] / std::sqrt(grid[i]);
    if (i > 0) {
      const double slack = kSubRootTolerance * std::max(1.0, values[i]);
      if (values[i] < values[i - 1] - slack || ratio[i] > ratio[i - 1] + slack) {
        throw PreconditionError("tabulated curve is not sub-root at r = " +
                                std::to_string(grid[i]) + "; subrootify it first");
      }
      ratio[i] = std::min(ratio[i], ratio[i - 1]);
      values[i] = std::max(values[i], values[i - 1]);
    }
  }
  auto g = std::make_shared<const std::vector<double>>(std::move(grid));
  auto v = std::make_shared<const std::vector<double>>(std::move(values));
  auto c = std::make_shared<const std::vector<double>>(std::move(ratio));
  return SubRootEvaluator([g, v, c](double r) {
    const auto& grid_ = *g;
    const double root = std::sqrt(r);
    if (r <= grid_.front()) return root * c->front();
    if (r >= grid_.back()) return root * c->back();
    const auto upper = std::upper_bound(grid_.begin(), grid_.end(), r);
    const auto i = static_cast<std::size_t>(upper - grid_.begin()) - 1;
    return std::min(root * (*c)[i], (*v)[i + 1]);
  });
}

std::string to_string(SubRootViolationKind kind) {
  switch (kind) {
    case SubRootViolationKind::negative: return "negative";
    case SubRootViolationKind::decreasing: return "decreasing";
    case SubRootViolationKind::ratio_increasing: return "ratio_increasing";
  }
  return "unknown";
}

SubRootReport check_subroot(const SubRootEvaluator& psi, const std::vector<double>& grid,
                            double tolerance) {
  check_grid(grid);
  SubRootReport report;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = psi(grid[i]);
  const double mc = psi.mc_tolerance();
  auto flag = [&](SubRootViolationKind kind, std::size_t i, double excess) {
    report.ok = false;
    report.violations.push_back({kind, i, grid[i], excess});
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double slack = tolerance * std::max(1.0, std::abs(values[i])) + mc;
    if (values[i] < -slack) flag(SubRootViolationKind::negative, i, -values[i] - slack);
    if (i == 0) continue;
    if (values[i] < values[i - 1] - slack) {
      flag(SubRootViolationKind::decreasing, i, values[i - 1] - values[i] - slack);
    }
    const double prev_ratio = values[i - 1] / std::sqrt(grid[i - 1]);
    const double ratio = values[i] / std::sqrt(grid[i]);
    const double ratio_slack = slack / std::sqrt(grid[i]);
    if (ratio > prev_ratio + ratio_slack) {
      flag(SubRootViolationKind::ratio_increasing, i, ratio - prev_ratio - ratio_slack);
    }
  }
  return report;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw PreconditionError("geometric grid needs 0 < lo < hi and at least 2 points");
  }
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

FixedPointResult fixed_point_iterate(const SubRootEvaluator& psi, double r0, double epsilon,
                                     std::size_t max_iter) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be > 0");
  if (!(r0 >= 0.0) || !std::isfinite(r0)) throw PreconditionError("r0 must be finite and >= 0");
  FixedPointResult result;
  result.epsilon = epsilon;
  result.trace.push_back(r0);
  double current = r0;
  for (std::size_t k = 0; k < max_iter; ++k) {
    const double next = psi(current);
    if (!std::isfinite(next) || next < 0.0) {
      throw NumericError("psi returned " + std::to_string(next) + " at r = " +
                         std::to_string(current));
    }
    if (next > current * (1.0 + 1e-12) + 1e-300) {
      throw NumericError("fixed-point iterate increased from " + std::to_string(current) + " to " +
                         std::to_string(next) +
                         ": start below the fixed point or psi is not sub-root");
    }
    result.trace.push_back(next);
    if (current - next <= epsilon * next) {
      result.r_star = current;
      result.iterations = k;
      result.converged = true;
      return result;
    }
    current = next;
  }
  result.r_star = current;
  result.iterations = max_iter;
  result.converged = false;
  return result;
}

double certified_start(const SubRootEvaluator& psi, double initial) {
  double r = initial > 0.0 ? initial : 1.0;
  r = std::max(r, psi.domain_lo());
  for (int doubling = 0; doubling < 2000; ++doubling) {
    if (psi(r) <= r) return r;
    r *= 2.0;
    if (!std::isfinite(r)) break;
  }
  throw NumericError("no r with psi(r) <= r found; psi is not sub-root");
}

FixedPointResult solve_fixed_point(const SubRootEvaluator& psi, double initial, double epsilon,
                                   std::size_t max_iter) {
  return fixed_point_iterate(psi, certified_start(psi, initial), epsilon, max_iter);
}

std::size_t iterations_needed(double r0, double r_star, double epsilon) {
  if (!(r_star > 0.0) || !(epsilon > 0.0)) {
    throw PreconditionError("iteration count needs r* > 0 and epsilon > 0");
  }
  if (r0 <= (1.0 + epsilon) * r_star) return 0;
  const double n = std::log2(std::log(r0 / r_star) / std::log1p(epsilon));
  return static_cast<std::size_t>(std::max(0.0, std::ceil(n)));
}

SubRootEvaluator subrootify(const std::function<double(double)>& phi,
                            const std::vector<double>& grid) {
  check_grid(grid);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = phi(grid[i]);
  return subrootify_values(grid, values);
}

SubRootEvaluator subrootify_values(const std::vector<double>& grid,
                                   const std::vector<double>& values) {
  check_grid(grid);
  if (values.size() != grid.size()) throw DimensionError("need one value per grid point");
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(values[i] >= 0.0)) throw PreconditionError("subrootify needs a nonnegative curve");
    sup = std::max(sup, values[i] / std::sqrt(grid[i]));
  }
  return SubRootEvaluator::sqrt_affine(sup, 0.0);
}

FixedPointComparison compare_fixed_points(const SubRootEvaluator& psi,
                                          const SubRootEvaluator& psi_hat, double alpha,
                                          double initial) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in [0, 1]");
  constexpr double eps = 1e-12;
  FixedPointComparison out;
  out.alpha = alpha;
  out.tolerance = 1e-8;
  out.r_star = solve_fixed_point(psi, initial, eps, 256).r_star;
  out.r_hat_star = solve_fixed_point(psi_hat, initial, eps, 256).r_star;
  out.psi_at_r_star = psi(out.r_star);
  out.psi_hat_at_r_star = psi_hat(out.r_star);
  const double tol_h = out.tolerance * std::max(1.0, out.psi_hat_at_r_star);
  out.hypothesis_holds = alpha * out.psi_hat_at_r_star <= out.psi_at_r_star + tol_h &&
                         out.psi_at_r_star <= out.psi_hat_at_r_star + tol_h;
  const double tol_c = out.tolerance * std::max(1.0, out.r_hat_star);
  out.conclusion_holds = alpha * alpha * out.r_hat_star <= out.r_star + tol_c &&
                         out.r_star <= out.r_hat_star + tol_c;
  return out;
}

}  // namespace locrad
