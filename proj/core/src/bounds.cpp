#include "locrad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "locrad/error.hpp"

namespace locrad {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw PreconditionError(message);
}

void check_common(const BoundParams& p) {
  require(p.n >= 1, "n must be >= 1");
  require(p.x > 0.0 && std::isfinite(p.x), "x must be > 0");
  require(p.b > p.a, "range needs b > a");
}

void check_K(const BoundParams& p) { require(p.K > 1.0 && std::isfinite(p.K), "K must be > 1"); }
void check_B(const BoundParams& p) { require(p.B >= 1.0 && std::isfinite(p.B), "B must be >= 1"); }
void check_L(const BoundParams& p) { require(p.L > 0.0 && std::isfinite(p.L), "L must be > 0"); }

void check_nonneg(double v, const char* name) {
  require(v >= 0.0 && std::isfinite(v), std::string(name) + " must be finite and >= 0");
}

double confidence(double x, int k) { return 1.0 - k * std::exp(-x); }

NamedValues base_inputs(const BoundParams& p) {
  return {{"n", static_cast<double>(p.n)}, {"x", p.x}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double c1_thm41(double B) { return 2.0 * std::max(10.0, B); }

}  // namespace

double lookup(const NamedValues& values, std::string_view name) {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  throw LookupError("no value named '" + std::string(name) + "'");
}

std::vector<std::string> known_theorem_ids() {
  return {"2.1", "2.2", "3.3-1", "3.3-2", "3.6", "4.1", "4.2", "5.1", "5.2",
          "5.3", "5.4", "6.2", "A.1", "A.2", "A.4"};
}

NamedValues constants_for(std::string_view id, double B, double L) {
  if (id == "2.1") return {{"complexity_factor", 2.0}, {"variance_factor", 2.0}, {"third", 1.0 / 3.0}};
  if (id == "2.2") return {{"complexity_factor", 10.0}, {"x_factor", 11.0}, {"radius_factor", 2.0}};
  if (id == "3.3-1" || id == "3.3") return {{"c1", 704.0}, {"c2", 26.0}, {"range_factor", 11.0}};
  if (id == "3.3-2") return {{"c1", 6.0}, {"c2", 5.0}, {"range_factor", 11.0}};
  if (id == "3.6") return {{"complexity_factor", 20.0}, {"x_factor", 26.0}, {"radius_factor", 2.0}};
  if (id == "4.1") {
    const double c1 = c1_thm41(B);
    return {{"c1", c1}, {"c2", c1 + 11.0}, {"r_factor", 6.0}, {"x_const", 11.0}, {"x_BK", 5.0}};
  }
  if (id == "4.2") {
    const double c1 = c1_thm41(B);
    const double c2 = 13.0;
    return {{"c1", c1},
            {"c2", c2},
            {"c3", std::max(26.0, (c2 + 2.0 * c1) / 3.0)},
            {"sandwich", 9.0 * (1.0 + c1) * (1.0 + c1)}};
  }
  if (id == "5.1") {
    return {{"psi_factor", 20.0}, {"psi_x", 13.0}, {"r_factor", 6.0}, {"x_const", 11.0}, {"x_K", 5.0}};
  }
  if (id == "5.2") return {};
  if (id == "5.3") return {{"r_factor", 705.0}, {"x_L", 11.0}, {"x_B", 27.0}};
  if (id == "5.4") {
    const double c1 = 2.0 * L * std::max(B, 10.0 * L);
    const double c2 = 11.0 * L * L + c1;
    return {{"c1", c1},
            {"c2", c2},
            {"c3", 2824.0 + 4.0 * B * (11.0 * L + 27.0 * B) / c2},
            {"r_factor", 705.0},
            {"x_L", 11.0},
            {"x_B", 27.0}};
  }
  if (id == "6.2") {
    return {{"psi_factor", 20.0}, {"psi_x", 26.0}, {"r_factor", 6.0}, {"x_const", 11.0}, {"x_K", 5.0}};
  }
  if (id == "A.1") return {{"variance_coef", 2.0}, {"x_third", 1.0 / 3.0}};
  if (id == "A.2") return {{"x_sixth", 1.0 / 6.0}};
  if (id == "A.4") return {{"first_denominator", 4.0}, {"second_half", 0.5}, {"third", 1.0 / 3.0}};
  throw LookupError("unknown theorem id '" + std::string(id) + "'");
}

BoundReport talagrand_deviation(const BoundParams& p, double complexity, double r, double alpha,
                                TalagrandVariant variant) {
  check_common(p);
  check_nonneg(complexity, "complexity");
  check_nonneg(r, "r");
  const double n = static_cast<double>(p.n);
  const double width = p.b - p.a;
  BoundReport rep;
  rep.theorem_id = "2.1";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"a", p.a}, {"b", p.b}, {"complexity", complexity},
                                       {"r", r}, {"alpha", alpha}});
  rep.constants = constants_for("2.1");
  const double variance_term = std::sqrt(2.0 * r * p.x / n);
  if (variant == TalagrandVariant::expected) {
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
    rep.bound_value = 2.0 * (1.0 + alpha) * complexity + variance_term +
                      width * (1.0 / 3.0 + 1.0 / alpha) * p.x / n;
    rep.confidence_k = 1;
    rep.formula_text = "2(1+alpha) E R_n F + sqrt(2 r x / n) + (b-a)(1/3 + 1/alpha) x/n";
  } else {
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    rep.bound_value =
        2.0 * (1.0 + alpha) / (1.0 - alpha) * complexity + variance_term +
        width * (1.0 / 3.0 + 1.0 / alpha + (1.0 + alpha) / (2.0 * alpha * (1.0 - alpha))) * p.x / n;
    rep.confidence_k = 2;
    rep.formula_text =
        "2(1+alpha)/(1-alpha) E_sigma R_n F + sqrt(2 r x / n) + "
        "(b-a)(1/3 + 1/alpha + (1+alpha)/(2 alpha (1-alpha))) x/n";
  }
  rep.confidence = confidence(p.x, rep.confidence_k);
  return rep;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

BoundReport talagrand_deviation_optimized(const BoundParams& p, double complexity, double r,
                                          TalagrandVariant variant) {
  const double lo = 1e-9;
  const double hi = variant == TalagrandVariant::expected ? 10.0 : 1.0 - 1e-9;
  const double alpha = golden_section_minimize(
      [&](double a) { return talagrand_deviation(p, complexity, r, a, variant).bound_value; }, lo,
      hi);
  return talagrand_deviation(p, complexity, r, alpha, variant);
}

ContainmentThreshold ball_containment_threshold(const BoundParams& p, double b,
                                                const std::vector<double>& grid,
                                                const std::function<double(double)>& complexity,
                                                ContainmentVariant variant) {
  check_common(p);
  require(b > 0.0, "envelope b must be > 0");
  if (grid.empty()) throw PreconditionError("grid must not be empty");
  const double n = static_cast<double>(p.n);
  ContainmentThreshold out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double c = complexity(r);
    const double required = variant == ContainmentVariant::population_ball
                                ? 10.0 * b * c + 11.0 * b * b * p.x / n
                                : 20.0 * c + 26.0 * p.x / n;
    if (r >= required) {
      out.satisfied = true;
      out.r = r;
      out.grid_index = i;
      out.complexity_at_r = c;
      out.required = required;
      return out;
    }
  }
  return out;
}

BoundReport main_bound_thm33(const BoundParams& p, double r_star, int part, Direction direction) {
  check_common(p);
  check_K(p);
  check_nonneg(r_star, "r_star");
  require(p.B > 0.0, "B must be > 0");
  require(part == 1 || part == 2, "part must be 1 or 2");
  const std::string id = part == 1 ? "3.3-1" : "3.3-2";
  BoundReport rep;
  rep.theorem_id = id;
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"B", p.B}, {"K", p.K}, {"a", p.a}, {"b", p.b},
                                       {"r_star", r_star},
                                       {"direction", direction == Direction::p_vs_pn ? 0.0 : 1.0}});
  rep.constants = constants_for(id);
  const double c1 = lookup(rep.constants, "c1");
  const double c2 = lookup(rep.constants, "c2");
  const double multiplier = direction == Direction::p_vs_pn ? p.K / (p.K - 1.0) : (p.K + 1.0) / p.K;
  rep.constants.emplace_back("multiplier", multiplier);
  rep.bound_value = c1 * p.K * r_star / p.B +
                    p.x * (11.0 * (p.b - p.a) + c2 * p.B * p.K) / static_cast<double>(p.n);
  rep.confidence_k = 1;
  rep.confidence = confidence(p.x, 1);
  rep.formula_text = (direction == Direction::p_vs_pn ? "Pf <= K/(K-1) P_n f + " : "P_n f <= (K+1)/K Pf + ") +
                     fmt(c1) + " K r*/B + x(11(b-a) + " + fmt(c2) + " B K)/n";
  return rep;
}

BoundReport main_bound_thm41(const BoundParams& p, double r_hat_star, Direction direction) {
  check_common(p);
  check_K(p);
  check_B(p);
  check_nonneg(r_hat_star, "r_hat_star");
  BoundReport rep;
  rep.theorem_id = "4.1";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"B", p.B}, {"K", p.K}, {"r_hat_star", r_hat_star},
                                       {"direction", direction == Direction::p_vs_pn ? 0.0 : 1.0}});
  rep.constants = constants_for("4.1", p.B);
  const double multiplier = direction == Direction::p_vs_pn ? p.K / (p.K - 1.0) : (p.K + 1.0) / p.K;
  rep.constants.emplace_back("multiplier", multiplier);
  rep.bound_value = 6.0 * p.K * r_hat_star / p.B +
                    p.x * (11.0 + 5.0 * p.B * p.K) / static_cast<double>(p.n);
  rep.confidence_k = 3;
  rep.confidence = confidence(p.x, 3);
  rep.formula_text = std::string(direction == Direction::p_vs_pn ? "Pf <= K/(K-1) P_n f + "
                                                                  : "P_n f <= (K+1)/K Pf + ") +
                     "6K r_hat*/B + x(11 + 5BK)/n";
  return rep;
}

BoundReport sandwich_thm42(const BoundParams& p, double r_star) {
  check_common(p);
  check_nonneg(r_star, "r_star");
  require(p.B > 0.0, "B must be > 0");
  BoundReport rep;
  rep.theorem_id = "4.2";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"B", p.B}, {"r_star", r_star}});
  rep.constants = constants_for("4.2", p.B);
  const double c3 = lookup(rep.constants, "c3");
  rep.constants.emplace_back("r_star_min", c3 * p.x / static_cast<double>(p.n));
  rep.bound_value = lookup(rep.constants, "sandwich") * r_star;
  rep.confidence_k = 4;
  rep.confidence = confidence(p.x, 4);
  rep.formula_text = "r* <= r_hat* <= 9(1 + c1)^2 r*, valid when r* >= c3 x/n";
  return rep;
}

BoundReport loss_class_bound_cor51(const BoundParams& p, double r_hat_star) {
  check_common(p);
  check_K(p);
  check_nonneg(r_hat_star, "r_hat_star");
  BoundReport rep;
  rep.theorem_id = "5.1";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"K", p.K}, {"r_hat_star", r_hat_star}});
  rep.constants = constants_for("5.1");
  rep.constants.emplace_back("multiplier", p.K / (p.K - 1.0));
  rep.bound_value = 6.0 * p.K * r_hat_star + p.x * (11.0 + 5.0 * p.K) / static_cast<double>(p.n);
  rep.confidence_k = 3;
  rep.confidence = confidence(p.x, 3);
  rep.formula_text = "P l_f <= K/(K-1) P_n l_f + 6K r_hat* + x(11 + 5K)/n";
  return rep;
}

BoundReport excess_risk_bound_thm52(const BoundParams& p, double l_star, double r_star, double c) {
  check_common(p);
  check_nonneg(l_star, "L*");
  check_nonneg(r_star, "r_star");
  check_nonneg(c, "c");
  BoundReport rep;
  rep.theorem_id = "5.2";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"l_star", l_star}, {"r_star", r_star}, {"c", c}});
  rep.constants = {{"c", c}};
  rep.bound_value = l_star + c * (std::sqrt(l_star * r_star) + r_star);
  rep.confidence_k = 2;
  rep.confidence = confidence(p.x, 2);
  rep.formula_text = "P l_f_hat <= L* + c(sqrt(L* r*) + r*)";
  return rep;
}

BoundReport excess_risk_bound_cor53(const BoundParams& p, double r) {
  check_common(p);
  check_B(p);
  check_L(p);
  check_nonneg(r, "r");
  BoundReport rep;
  rep.theorem_id = "5.3";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"B", p.B}, {"L", p.L}, {"r", r}});
  rep.constants = constants_for("5.3", p.B, p.L);
  rep.bound_value =
      705.0 * r / p.B + (11.0 * p.L + 27.0 * p.B) * p.x / static_cast<double>(p.n);
  rep.confidence_k = 1;
  rep.confidence = confidence(p.x, 1);
  rep.formula_text = "P(l_f_hat - l_f*) <= 705 r/B + (11L + 27B) x/n";
  return rep;
}

BoundReport excess_risk_bound_thm54(const BoundParams& p, double r_hat_star) {
  check_common(p);
  check_B(p);
  check_L(p);
  check_nonneg(r_hat_star, "r_hat_star");
  BoundReport rep;
  rep.theorem_id = "5.4";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"B", p.B}, {"L", p.L}, {"r_hat_star", r_hat_star}});
  rep.constants = constants_for("5.4", p.B, p.L);
  rep.bound_value =
      705.0 * r_hat_star / p.B + (11.0 * p.L + 27.0 * p.B) * p.x / static_cast<double>(p.n);
  rep.confidence_k = 4;
  rep.confidence = confidence(p.x, 4);
  rep.formula_text = "P(l_f_hat - l_f*) <= 705 r_hat*/B + (11L + 27B) x/n";
  return rep;
}

BoundReport classification_bound_cor62(const BoundParams& p, double r_hat_star,
                                       std::optional<double> c) {
  check_common(p);
  check_K(p);
  check_nonneg(r_hat_star, "r_hat_star");
  BoundReport rep;
  rep.theorem_id = "6.2";
  rep.inputs = base_inputs(p);
  rep.inputs.insert(rep.inputs.end(), {{"K", p.K}, {"r_hat_star", r_hat_star}});
  rep.constants = constants_for("6.2");
  rep.constants.emplace_back("multiplier", p.K / (p.K - 1.0));
  const double n = static_cast<double>(p.n);
  if (c) {
    check_nonneg(*c, "c");
    rep.constants.emplace_back("c", *c);
    rep.bound_value = *c * p.K * (r_hat_star + p.x / n);
    rep.formula_text = "P l_f <= K/(K-1) P_n l_f + cK(r_hat* + x/n)";
  } else {
    rep.bound_value = 6.0 * p.K * r_hat_star + p.x * (11.0 + 5.0 * p.K) / n;
    rep.formula_text = "P l_f <= K/(K-1) P_n l_f + 6K r_hat* + x(11 + 5K)/n";
  }
  rep.confidence_k = 3;
  rep.confidence = confidence(p.x, 3);
  return rep;
}

double bennett_h(double u) {
  require(u >= -1.0, "h(u) needs u >= -1");
  if (u == -1.0) return 1.0;
  return (1.0 + u) * std::log1p(u) - u;
}

BennettTail bennett_tail_thmA1(std::size_t n, double sigma_sq, double c, double ez, double x,
                               double deviation) {
  check_nonneg(sigma_sq, "sigma^2");
  check_nonneg(ez, "EZ");
  check_nonneg(x, "x");
  check_nonneg(deviation, "deviation");
  require(c > 0.0, "c must be > 0");
  BennettTail out;
  out.v = static_cast<double>(n) * sigma_sq + 2.0 * c * ez;
  if (out.v == 0.0) {
    out.tail_probability = deviation > 0.0 ? 0.0 : 1.0;
  } else {
    out.tail_probability = std::exp(-out.v * bennett_h(deviation / (c * out.v)));
  }
  out.additive = ez + std::sqrt(2.0 * x * out.v) + c * x / 3.0;
  return out;
}

BoundReport rademacher_concentration_thmA2(double b_minus_a, double x, double ez,
                                           ConcentrationDirection direction) {
  check_nonneg(b_minus_a, "b - a");
  check_nonneg(x, "x");
  check_nonneg(ez, "EZ");
  BoundReport rep;
  rep.theorem_id = "A.2";
  rep.inputs = {{"b_minus_a", b_minus_a}, {"x", x}, {"EZ", ez},
                {"direction", direction == ConcentrationDirection::upper ? 0.0 : 1.0}};
  rep.constants = constants_for("A.2");
  const double root = std::sqrt(b_minus_a * x * ez);
  if (direction == ConcentrationDirection::upper) {
    rep.bound_value = ez + root + b_minus_a * x / 6.0;
    rep.formula_text = "Z <= EZ + sqrt((b-a) x EZ) + (b-a) x/6";
  } else {
    rep.bound_value = ez - root;
    rep.formula_text = "Z >= EZ - sqrt((b-a) x EZ)";
  }
  rep.confidence_k = 1;
  rep.confidence = confidence(x, 1);
  return rep;
}

double expected_from_conditional(double conditional, double b_minus_a, std::size_t n, double x,
                                 double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(n >= 1, "n must be >= 1");
  return conditional / (1.0 - alpha) +
         b_minus_a * x / (4.0 * static_cast<double>(n) * alpha * (1.0 - alpha));
}

double conditional_from_expected(double expected, double b_minus_a, std::size_t n, double x,
                                 double alpha) {
  require(alpha > 0.0, "alpha must be > 0");
  require(n >= 1, "n must be >= 1");
  return (1.0 + alpha) * expected +
         b_minus_a * x / (2.0 * static_cast<double>(n)) * (1.0 / (2.0 * alpha) + 1.0 / 3.0);
}

}  // namespace locrad
