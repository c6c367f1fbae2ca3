#pragma once

// Closed-form calculators for the explicit-constant inequalities of local
// Rademacher analysis. Every calculator is pure: same inputs, same report.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace locrad {

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Looks up a named value; throws LookupError when missing.
double lookup(const NamedValues& values, std::string_view name);

struct BoundParams {
  std::size_t n = 1;
  double x = 1.0;  // bound holds with probability >= 1 - k e^{-x}
  double B = 1.0;  // Pf^2 <= B Pf (or T(f) <= B Pf)
  double K = 2.0;
  double L = 1.0;  // loss Lipschitz constant
  double a = 0.0;  // range lower end
  double b = 1.0;  // range upper end
};

struct BoundReport {
  std::string theorem_id;
  NamedValues inputs;
  NamedValues constants;
  double bound_value = 0.0;
  double confidence = 0.0;  // 1 - k e^{-x}
  int confidence_k = 1;
  std::string formula_text;
};

/// Identifiers accepted by constants_for and the CLI `bound` subcommand.
std::vector<std::string> known_theorem_ids();

/// Explicit constants of a result. B and L enter the B/L-dependent tables.
NamedValues constants_for(std::string_view theorem_id, double B = 1.0, double L = 1.0);

enum class TalagrandVariant { expected, conditional };
enum class Direction { p_vs_pn, pn_vs_p };

/// sup_f (Pf - P_n f) under Var[f] <= r, for a fixed alpha.
BoundReport talagrand_deviation(const BoundParams& p, double complexity, double r, double alpha,
                                TalagrandVariant variant);

/// Same, with alpha minimized by golden-section search on (0, 1) for the
/// conditional variant and (0, 10] for the expected one. The chosen alpha is
/// reported among the inputs.
BoundReport talagrand_deviation_optimized(const BoundParams& p, double complexity, double r,
                                          TalagrandVariant variant);

/// Minimizes a unimodal function on [lo, hi] to tolerance `tol`.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-8);

enum class ContainmentVariant {
  population_ball,  // r >= 10 b E R_n{f : Pf^2 <= r} + 11 b^2 x / n
  empirical_ball,   // r >= 20 E R_n{star(F,0) : Pf^2 <= r} + 26 x / n
};

struct ContainmentThreshold {
  bool satisfied = false;
  double r = 0.0;
  std::size_t grid_index = 0;
  double complexity_at_r = 0.0;
  double required = 0.0;  // right-hand side at r
};

/// Smallest grid r meeting the containment condition for the given
/// localized complexity curve r -> E R_n{...}. b is the envelope of the class.
ContainmentThreshold ball_containment_threshold(const BoundParams& p, double b,
                                                const std::vector<double>& grid,
                                                const std::function<double(double)>& complexity,
                                                ContainmentVariant variant);

/// Additive term c1 K r*/B + x(11(b - a) + c2 B K)/n; the multiplier
/// K/(K-1) (or (K+1)/K in the reverse direction) is in the constants.
BoundReport main_bound_thm33(const BoundParams& p, double r_star, int part, Direction direction);

/// 6K r_hat*/B + x(11 + 5BK)/n at confidence 1 - 3e^{-x}.
BoundReport main_bound_thm41(const BoundParams& p, double r_hat_star, Direction direction);

/// r* <= r_hat* <= 9(1 + c1)^2 r*; bound_value is the upper end. The
/// constants include the precondition threshold c3 x/n on r*.
BoundReport sandwich_thm42(const BoundParams& p, double r_star);

/// Nonnegative [0,1] losses: 6K r_hat* + x(11 + 5K)/n.
BoundReport loss_class_bound_cor51(const BoundParams& p, double r_hat_star);

/// L* + c(sqrt(L* r*) + r*); c has no published value and must be supplied.
BoundReport excess_risk_bound_thm52(const BoundParams& p, double l_star, double r_star, double c);

/// 705 r/B + (11L + 27B)x/n at confidence 1 - e^{-x}.
BoundReport excess_risk_bound_cor53(const BoundParams& p, double r);

/// 705 r_hat*/B + (11L + 27B)x/n at confidence 1 - 4e^{-x}; constants carry
/// c1, c2 and the radius multiplier c3.
BoundReport excess_risk_bound_thm54(const BoundParams& p, double r_hat_star);

/// Discrete-loss classification: additive term 6K r_hat* + (11 + 5K)x/n by
/// default, or cK(r_hat* + x/n) when c is supplied. Confidence 1 - 3e^{-x}.
BoundReport classification_bound_cor62(const BoundParams& p, double r_hat_star,
                                       std::optional<double> c = std::nullopt);

/// h(u) = (1 + u) log(1 + u) - u.
double bennett_h(double u);

struct BennettTail {
  double v = 0.0;                 // n sigma^2 + 2 c EZ
  double tail_probability = 0.0;  // exp(-v h(deviation / (c v)))
  double additive = 0.0;          // EZ + sqrt(2 x v) + c x / 3
};

BennettTail bennett_tail_thmA1(std::size_t n, double sigma_sq, double c, double ez, double x,
                               double deviation);

enum class ConcentrationDirection { upper, lower };

/// EZ + sqrt((b-a) x EZ) + (b-a)x/6, or EZ - sqrt((b-a) x EZ).
BoundReport rademacher_concentration_thmA2(double b_minus_a, double x, double ez,
                                           ConcentrationDirection direction);

/// E R_n F <= E_sigma R_n F / (1 - alpha) + (b-a)x / (4 n alpha (1 - alpha)).
double expected_from_conditional(double conditional, double b_minus_a, std::size_t n, double x,
                                 double alpha);

/// E_sigma R_n F <= (1 + alpha) E R_n F + (b-a)x/(2n) (1/(2 alpha) + 1/3).
double conditional_from_expected(double expected, double b_minus_a, std::size_t n, double x,
                                 double alpha);

}  // namespace locrad
