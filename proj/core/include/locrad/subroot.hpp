#pragma once

// Sub-root functions: nonnegative, nondecreasing, with psi(r)/sqrt(r)
// nonincreasing. Fixed points are computed by the iteration r_{k+1} = psi(r_k)
// started above the fixed point.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace locrad {

class SubRootEvaluator {
 public:
  using Fn = std::function<double(double)>;

  /// `mc_tolerance` is extra absolute slack granted to check_subroot when the
  /// curve comes from Monte Carlo averages.
  explicit SubRootEvaluator(Fn fn, double domain_lo = 0.0, double mc_tolerance = 0.0);

  double operator()(double r) const;
  double domain_lo() const noexcept { return domain_lo_; }
  double mc_tolerance() const noexcept { return mc_tolerance_; }

  /// a sqrt(r) + c with a, c >= 0.
  static SubRootEvaluator sqrt_affine(double a, double c);

  /// Curve known at grid points r_0 < ... < r_k (all > 0). Between grid
  /// points psi(r) = min(sqrt(r) c_i, psi(r_{i+1})) with c_i = psi(r_i)/sqrt(r_i);
  /// sqrt(r) c_0 below the grid and sqrt(r) c_k above it. The tabulated values
  /// must themselves be sub-root (use subrootify otherwise).
  static SubRootEvaluator tabulated(std::vector<double> grid, std::vector<double> values);

 private:
  Fn fn_;
  double domain_lo_;
  double mc_tolerance_;
};

enum class SubRootViolationKind { negative, decreasing, ratio_increasing };

std::string to_string(SubRootViolationKind kind);

struct SubRootViolation {
  SubRootViolationKind kind;
  std::size_t index;  // grid index where the violation is observed
  double r;
  double excess;      // amount beyond tolerance
};

struct SubRootReport {
  bool ok = true;
  std::vector<SubRootViolation> violations;
};

inline constexpr double kSubRootTolerance = 1e-9;

/// Checks the three sub-root conditions on a strictly increasing positive
/// grid, allowing `tolerance` (relative, plus the evaluator's MC slack).
SubRootReport check_subroot(const SubRootEvaluator& psi, const std::vector<double>& grid,
                            double tolerance = kSubRootTolerance);

/// n points geometrically spaced on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

struct FixedPointResult {
  double r_star = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;  // r_0, r_1, ...
  double epsilon = 0.0;
  bool converged = false;
};

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr std::size_t kDefaultMaxIter = 64;

/// Iterates r_{k+1} = psi(r_k) from r0 and returns r_N for the first N with
/// r_N - r_{N+1} <= epsilon r_{N+1}. r0 must be at or above the fixed point;
/// an increasing step raises NumericError.
FixedPointResult fixed_point_iterate(const SubRootEvaluator& psi, double r0,
                                     double epsilon = kDefaultEpsilon,
                                     std::size_t max_iter = kDefaultMaxIter);

/// Smallest r in {initial, 2 initial, 4 initial, ...} with psi(r) <= r. For a
/// sub-root psi that r is at or above the fixed point.
double certified_start(const SubRootEvaluator& psi, double initial);

/// fixed_point_iterate from certified_start(psi, initial).
FixedPointResult solve_fixed_point(const SubRootEvaluator& psi, double initial,
                                   double epsilon = kDefaultEpsilon,
                                   std::size_t max_iter = kDefaultMaxIter);

/// Iterations that guarantee r_N <= (1 + epsilon) r*:
/// ceil(log2(ln(r0 / r*) / ln(1 + epsilon))), and 0 when r0 <= (1 + epsilon) r*.
std::size_t iterations_needed(double r0, double r_star, double epsilon);

/// psi(r) = sqrt(r) sup_i phi(r_i)/sqrt(r_i) over a positive grid.
SubRootEvaluator subrootify(const std::function<double(double)>& phi,
                            const std::vector<double>& grid);
SubRootEvaluator subrootify_values(const std::vector<double>& grid,
                                   const std::vector<double>& values);

struct FixedPointComparison {
  double alpha = 1.0;
  double r_star = 0.0;      // fixed point of psi
  double r_hat_star = 0.0;  // fixed point of psi_hat
  double psi_at_r_star = 0.0;
  double psi_hat_at_r_star = 0.0;
  bool hypothesis_holds = false;  // alpha psi_hat(r*) <= psi(r*) <= psi_hat(r*)
  bool conclusion_holds = false;  // alpha^2 r_hat* <= r* <= r_hat*
  double tolerance = 0.0;
};

/// Solves both fixed points and checks the sandwich alpha^2 r_hat* <= r* <= r_hat*
/// when alpha psi_hat(r*) <= psi(r*) <= psi_hat(r*) holds.
FixedPointComparison compare_fixed_points(const SubRootEvaluator& psi,
                                          const SubRootEvaluator& psi_hat, double alpha,
                                          double initial = 1.0);

}  // namespace locrad
