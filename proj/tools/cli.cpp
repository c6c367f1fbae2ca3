#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "locrad/bounds.hpp"
#include "locrad/classification.hpp"
#include "locrad/empirical.hpp"
#include "locrad/error.hpp"
#include "locrad/harness.hpp"
#include "locrad/io.hpp"
#include "locrad/kernel.hpp"
#include "locrad/rademacher.hpp"
#include "locrad/subroot.hpp"

namespace locrad::cli {
namespace {

struct Options {
  // shared by every subcommand
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::optional<std::size_t> n;
  double x = 1.0;
  double K = 2.0;
  double B = 1.0;
  double L = 1.0;
  std::optional<double> r;
  std::string format = "json";
  std::string out;
  std::string config;

  // rademacher / fixed-point / validate
  std::string instance;
  std::string method = "auto";
  std::size_t draws = kDefaultSigmaDraws;
  std::string localize = "none";
  bool expected = false;
  std::size_t data_draws = 512;

  // fixed-point
  std::string curve;
  bool make_subroot = false;
  std::optional<double> a_coef;
  std::optional<double> c_coef;
  std::optional<double> r0;
  double epsilon = kDefaultEpsilon;
  std::size_t max_iter = kDefaultMaxIter;

  // bound
  std::string theorem;
  int part = 1;
  std::optional<double> alpha;
  std::string variant = "expected";
  std::string direction = "p-vs-pn";
  double complexity = 0.0;
  double l_star = 0.0;
  std::optional<double> c;
  double range_lo = 0.0;
  double range_hi = 1.0;
  double sigma_sq = 0.0;
  double ez = 0.0;
  double deviation = 0.0;
  double value = 0.0;
  std::string mode = "expected-from-conditional";
  double envelope = 1.0;

  // classify
  std::string data;

  // kernel
  std::string gram_file;
  std::string features;
  std::string kernel = "gaussian";
  double width = 1.0;
  double degree = 2.0;
  double offset = 1.0;

  // validate
  std::string claim;
  std::size_t sigma_draws = 256;
  bool informational = false;
  bool no_fit = false;
  bool margins = false;
};

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--seed", o.seed, "Master seed");
  sub.add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  sub.add_option("--n", o.n, "Sample size");
  sub.add_option("--x", o.x, "Confidence parameter x (probability 1 - k e^-x)");
  sub.add_option("--K", o.K, "K > 1");
  sub.add_option("--B", o.B, "Variance-to-mean constant B");
  sub.add_option("--L", o.L, "Loss Lipschitz constant L");
  sub.add_option("--r", o.r, "Radius or fixed point, depending on the command");
  sub.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--out", o.out, "Write the report here instead of stdout");
  sub.add_option("--config", o.config, "Flat key = value file; flags override it");
}

SampleSet instance_sample(const InstanceFile& inst, const Options& o) {
  if (auto s = inst.sample()) return *s;
  if (!o.n) throw ConfigurationError("the instance lists no sample; pass --n to draw one");
  return inst.dist.sample(*o.n, o.seed);
}

SigmaPlan plan_for(const Options& o, std::size_t n) {
  if (o.method == "exact") return SigmaPlan::exact();
  if (o.method == "mc") return SigmaPlan::monte_carlo(o.draws, o.seed);
  return SigmaPlan::automatic(n, o.draws, o.seed);
}

std::vector<double> second_moments(const TabulatedClass& cls, const DiscreteDistribution& dist) {
  std::vector<double> q(cls.num_functions());
  for (std::size_t f = 0; f < q.size(); ++f) {
    std::vector<double> sq(cls.row(f).begin(), cls.row(f).end());
    for (double& v : sq) v *= v;
    q[f] = true_mean(dist, sq);
  }
  return q;
}

std::vector<double> empirical_second_moments(const TabulatedClass& on_sample) {
  std::vector<double> q(on_sample.num_functions());
  for (std::size_t f = 0; f < q.size(); ++f) {
    double s = 0.0;
    for (double v : on_sample.row(f)) s += v * v;
    q[f] = s / static_cast<double>(on_sample.num_points());
  }
  return q;
}

double require_r(const Options& o, const char* what) {
  if (!o.r) throw ConfigurationError(std::string("--r is required for ") + what);
  return *o.r;
}

BoundParams params_of(const Options& o) {
  BoundParams p;
  p.n = o.n.value_or(1);
  p.x = o.x;
  p.B = o.B;
  p.K = o.K;
  p.L = o.L;
  p.a = o.range_lo;
  p.b = o.range_hi;
  return p;
}

std::string cmd_rademacher(const Options& o) {
  if (o.instance.empty()) throw ConfigurationError("--instance is required");
  const InstanceFile inst = parse_instance(read_text_file(o.instance));
  const bool star = o.localize == "star-pn" || o.localize == "star-p";
  const double r = o.localize == "none" ? 0.0 : require_r(o, "localized averages");

  if (o.expected) {
    if (!o.n) throw ConfigurationError("--n is required with --expected");
    const std::size_t n = *o.n;
    const SigmaPlan inner = o.method == "exact" ? SigmaPlan::exact()
                                                : SigmaPlan::automatic(n, o.draws, o.seed);
    if (o.localize == "none") return to_json(expected_rademacher(inst.cls, inst.dist, n, o.data_draws, inner, o.seed));
    const auto q = second_moments(inst.cls, inst.dist);
    ExpectedProjections proj(inst.cls, inst.dist, n, o.data_draws, inner, o.seed);
    if (o.localize == "p") {
      std::vector<std::size_t> members;
      for (std::size_t f = 0; f < q.size(); ++f)
        if (q[f] <= r) members.push_back(f);
      return to_json(proj.supremum(members));
    }
    if (o.localize == "star-p") return to_json(proj.star_hull_true(q, r));
    throw ConfigurationError("expected averages localize by 'p' or 'star-p' only");
  }

  const SampleSet sample = instance_sample(inst, o);
  const TabulatedClass on_sample = inst.cls.on_sample(sample);
  const SigmaPlan plan = plan_for(o, sample.n());
  if (star) {
    const auto q = o.localize == "star-pn" ? empirical_second_moments(on_sample)
                                           : second_moments(inst.cls, inst.dist);
    const SigmaProjections proj(on_sample, plan);
    return to_json(proj.estimate(proj.star_hull(q, r)));
  }
  std::vector<std::size_t> members;
  if (o.localize == "none") {
    for (std::size_t f = 0; f < inst.cls.num_functions(); ++f) members.push_back(f);
  } else {
    const Functional fn = o.localize == "pn" ? Functional::pn_sq : Functional::p_sq;
    members = localized_indices(inst.cls, sample, inst.dist, fn, r);
  }
  const SigmaProjections proj(on_sample, plan);
  return to_json(proj.estimate(proj.supremum(members)));
}

std::string cmd_fixed_point(const Options& o) {
  std::optional<SubRootEvaluator> psi;
  std::shared_ptr<SigmaProjections> proj;
  if (!o.curve.empty()) {
    auto [grid, values] = curve_from_csv(parse_csv(read_text_file(o.curve)));
    psi = o.make_subroot ? subrootify_values(grid, values) : SubRootEvaluator::tabulated(grid, values);
  } else if (o.a_coef || o.c_coef) {
    psi = SubRootEvaluator::sqrt_affine(o.a_coef.value_or(0.0), o.c_coef.value_or(0.0));
  } else if (!o.instance.empty()) {
    const InstanceFile inst = parse_instance(read_text_file(o.instance));
    const SampleSet sample = instance_sample(inst, o);
    const TabulatedClass on_sample = inst.cls.on_sample(sample);
    proj = std::make_shared<SigmaProjections>(on_sample, plan_for(o, sample.n()));
    const auto q = empirical_second_moments(on_sample);
    const NamedValues k = constants_for("4.1", o.B);
    const double c1 = lookup(k, "c1");
    const double add = lookup(k, "c2") * o.x / static_cast<double>(sample.n());
    psi = SubRootEvaluator([proj, q, c1, add](double r) {
      const double centered = proj->star_hull(q, r * 2.0).mean - proj->star_hull(q, 0.0).mean;
      return c1 * std::max(0.0, centered) + add;
    });
  } else {
    throw ConfigurationError("give --curve, --a/--c or --instance");
  }
  const FixedPointResult res = o.r0 ? fixed_point_iterate(*psi, *o.r0, o.epsilon, o.max_iter)
                                    : solve_fixed_point(*psi, 1.0, o.epsilon, o.max_iter);
  return o.format == "csv" ? trace_csv(res) : to_json(res);
}

BoundReport wrap(std::string id, NamedValues inputs, double value, int k, double x, std::string formula) {
  BoundReport rep;
  rep.theorem_id = std::move(id);
  rep.inputs = std::move(inputs);
  rep.constants = constants_for(rep.theorem_id);
  rep.bound_value = value;
  rep.confidence_k = k;
  rep.confidence = 1.0 - k * std::exp(-x);
  rep.formula_text = std::move(formula);
  return rep;
}

BoundReport compute_bound(const Options& o) {
  std::string id = o.theorem;
  if (id == "3.3") id = o.part == 2 ? "3.3-2" : "3.3-1";
  const BoundParams p = params_of(o);
  const Direction dir = o.direction == "pn-vs-p" ? Direction::pn_vs_p : Direction::p_vs_pn;
  if (id == "2.1") {
    const TalagrandVariant v = o.variant == "conditional" ? TalagrandVariant::conditional
                                                          : TalagrandVariant::expected;
    const double r = require_r(o, "2.1");
    return o.alpha ? talagrand_deviation(p, o.complexity, r, *o.alpha, v)
                   : talagrand_deviation_optimized(p, o.complexity, r, v);
  }
  if (id == "2.2" || id == "3.6") {
    if (o.curve.empty()) throw ConfigurationError("--curve (r, complexity) is required for " + id);
    auto [grid, values] = curve_from_csv(parse_csv(read_text_file(o.curve)));
    const auto lookup_value = [&](double r) {
      const auto it = std::find(grid.begin(), grid.end(), r);
      return values[static_cast<std::size_t>(it - grid.begin())];
    };
    const ContainmentThreshold t = ball_containment_threshold(
        p, o.envelope, grid, lookup_value,
        id == "2.2" ? ContainmentVariant::population_ball : ContainmentVariant::empirical_ball);
    NamedValues in{{"n", static_cast<double>(p.n)}, {"x", p.x}, {"envelope", o.envelope},
                   {"satisfied", t.satisfied ? 1.0 : 0.0}, {"grid_index", static_cast<double>(t.grid_index)},
                   {"complexity_at_r", t.complexity_at_r}, {"required", t.required}};
    return wrap(id, std::move(in), t.r, 1, p.x,
                id == "2.2" ? "smallest grid r >= 10 b E R_n{f : Pf^2 <= r} + 11 b^2 x/n"
                            : "smallest grid r >= 20 E R_n{star(F,0) : Pf^2 <= r} + 26 x/n");
  }
  if (id == "3.3-1" || id == "3.3-2")
    return main_bound_thm33(p, require_r(o, "3.3"), id == "3.3-1" ? 1 : 2, dir);
  if (id == "4.1") return main_bound_thm41(p, require_r(o, "4.1"), dir);
  if (id == "4.2") return sandwich_thm42(p, require_r(o, "4.2"));
  if (id == "5.1") return loss_class_bound_cor51(p, require_r(o, "5.1"));
  if (id == "5.2") {
    if (!o.c) throw ConfigurationError("5.2 has no published constant; pass --c");
    return excess_risk_bound_thm52(p, o.l_star, require_r(o, "5.2"), *o.c);
  }
  if (id == "5.3") return excess_risk_bound_cor53(p, require_r(o, "5.3"));
  if (id == "5.4") return excess_risk_bound_thm54(p, require_r(o, "5.4"));
  if (id == "6.2") return classification_bound_cor62(p, require_r(o, "6.2"), o.c);
  if (id == "A.1") {
    const BennettTail t = bennett_tail_thmA1(p.n, o.sigma_sq, o.c.value_or(1.0), o.ez, p.x, o.deviation);
    NamedValues in{{"n", static_cast<double>(p.n)}, {"x", p.x}, {"sigma_sq", o.sigma_sq},
                   {"c", o.c.value_or(1.0)}, {"ez", o.ez}, {"deviation", o.deviation},
                   {"v", t.v}, {"tail_probability", t.tail_probability}};
    return wrap("A.1", std::move(in), t.additive, 1, p.x, "EZ + sqrt(2 x v) + c x/3, v = n sigma^2 + 2 c EZ");
  }
  if (id == "A.2")
    return rademacher_concentration_thmA2(o.range_hi - o.range_lo, p.x, o.ez,
                                           o.variant == "lower" ? ConcentrationDirection::lower
                                                                : ConcentrationDirection::upper);
  if (id == "A.4") {
    const double alpha = o.alpha.value_or(0.5);
    const double width = o.range_hi - o.range_lo;
    const bool e2c = o.mode == "conditional-from-expected";
    const double v = e2c ? conditional_from_expected(o.value, width, p.n, p.x, alpha)
                         : expected_from_conditional(o.value, width, p.n, p.x, alpha);
    NamedValues in{{"n", static_cast<double>(p.n)}, {"x", p.x}, {"value", o.value},
                   {"alpha", alpha}, {"b_minus_a", width}};
    return wrap("A.4", std::move(in), v, 1, p.x,
                e2c ? "(1 + alpha) E R_n F + (b-a)x/(2n) (1/(2 alpha) + 1/3)"
                    : "E_sigma R_n F/(1 - alpha) + (b-a)x/(4 n alpha (1 - alpha))");
  }
  throw LookupError("unknown theorem id '" + o.theorem + "'");
}

std::string cmd_bound(const Options& o) {
  const BoundReport rep = compute_bound(o);
  if (o.format == "csv") {
    NamedValues all = rep.inputs;
    all.insert(all.end(), rep.constants.begin(), rep.constants.end());
    all.emplace_back("bound_value", rep.bound_value);
    all.emplace_back("confidence", rep.confidence);
    return named_values_csv(all);
  }
  return to_json(rep);
}

std::string cmd_classify(const Options& o) {
  if (o.data.empty()) throw ConfigurationError("--data (x,label CSV) is required");
  const LabeledSample labeled = labeled_sample_from_csv(parse_csv(read_text_file(o.data)));
  std::optional<ErmOracle> oracle;
  if (labeled.has_features()) {
    oracle = ErmOracle::threshold_stumps(labeled.features());
  } else {
    if (o.instance.empty()) throw ConfigurationError("non-numeric points need --instance with the predictors");
    const InstanceFile inst = parse_instance(read_text_file(o.instance));
    oracle = ErmOracle::finite_class(inst.cls.on_sample(labeled.to_sample(inst.dist)));
  }
  if (o.method == "thm63") {
    const double r = require_r(o, "thm63");
    const Thm63Result res = thm63_psi_hat_upper(*oracle, labeled.ys(), r, o.x, o.seed);
    return to_json(res, r, o.x);
  }
  if (o.method != "cor62" && o.method != "auto")
    throw ConfigurationError("classify --method is cor62 or thm63");
  return to_json(cor62_bound(*oracle, labeled.ys(), o.x, o.K, o.seed, o.c));
}

std::string cmd_kernel(const Options& o) {
  KernelPipelineResult res = [&] {
    if (!o.gram_file.empty())
      return kernel_pipeline(gram_from_csv(parse_csv(read_text_file(o.gram_file))), o.x, o.L, o.B, o.r);
    if (o.features.empty()) throw ConfigurationError("give --gram or --features");
    const auto feats = features_from_csv(parse_csv(read_text_file(o.features)));
    KernelSpec spec = o.kernel == "linear"       ? KernelSpec::linear()
                      : o.kernel == "polynomial" ? KernelSpec::polynomial(o.degree, o.offset)
                      : o.kernel == "gaussian"   ? KernelSpec::gaussian(o.width)
                                                 : throw ConfigurationError("unknown kernel '" + o.kernel + "'");
    return kernel_pipeline(spec, feats, o.x, o.L, o.B, o.r);
  }();
  if (o.format == "csv") {
    std::string out = "index,eigenvalue\n";
    for (std::size_t i = 0; i < res.spectrum.eigenvalues.size(); ++i) {
      std::ostringstream os;
      os.precision(17);
      os << i << "," << res.spectrum.eigenvalues[i] << "\n";
      out += os.str();
    }
    return out;
  }
  return to_json(res);
}

std::string cmd_validate(const Options& o) {
  if (o.claim.empty()) throw ConfigurationError("--claim is required");
  TrialConfig config;
  config.claim_id = o.claim;
  if (!o.instance.empty()) config.instance = parse_instance(read_text_file(o.instance)).instance();
  config.n = o.n.value_or(0);
  config.x = o.x;
  config.K = o.K;
  config.num_trials = o.trials;
  config.seed = o.seed;
  config.data_draws = o.data_draws;
  config.sigma_draws = o.sigma_draws;
  config.enforce_precondition = !o.informational;
  config.fit_scaling = !o.no_fit;
  const TrialReport rep = validate(config);
  return o.format == "csv" ? margins_csv(rep) : to_json(rep, o.margins);
}

// Splices `key = value` lines of --config in right after the subcommand name,
// so any flag given on the command line comes later and wins.
std::vector<std::string> apply_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.size() < 2) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[1]);
  } catch (const CLI::Error&) {
    return args;
  }
  std::vector<std::string> out{args[0], args[1]};
  for (const auto& [key, value] : parse_config(read_text_file(path))) {
    if (key == "config") continue;
    if (sub->get_option_no_throw("--" + key) == nullptr)
      throw ConfigurationError("config key '" + key + "' is not an option of '" + args[1] + "'");
    out.push_back("--" + key + "=" + value);
  }
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Local Rademacher complexity toolkit", "locrad"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* rad = app.add_subcommand("rademacher", "Conditional or expected Rademacher averages of a class");
  add_common(*rad, o);
  rad->add_option("--instance", o.instance, "Instance file")->required();
  rad->add_option("--method", o.method, "Sign source")->check(CLI::IsMember({"auto", "exact", "mc"}));
  rad->add_option("--draws", o.draws, "Monte Carlo sign vectors")->check(CLI::PositiveNumber);
  rad->add_option("--localize", o.localize, "Localization ball")
      ->check(CLI::IsMember({"none", "pn", "p", "star-pn", "star-p"}));
  rad->add_flag("--expected", o.expected, "Average over fresh samples of size --n");
  rad->add_option("--data-draws", o.data_draws, "Samples for --expected")->check(CLI::PositiveNumber);

  auto* fp = app.add_subcommand("fixed-point", "Fixed point of a sub-root function");
  add_common(*fp, o);
  fp->add_option("--curve", o.curve, "CSV with columns r,psi");
  fp->add_flag("--subrootify", o.make_subroot, "Replace the curve by its smallest sub-root majorant on the grid");
  fp->add_option("--a", o.a_coef, "psi(r) = a sqrt(r) + c");
  fp->add_option("--c", o.c_coef, "psi(r) = a sqrt(r) + c");
  fp->add_option("--instance", o.instance, "Instance file: solve the empirical star-hull psi_hat");
  fp->add_option("--method", o.method, "Sign source")->check(CLI::IsMember({"auto", "exact", "mc"}));
  fp->add_option("--draws", o.draws, "Monte Carlo sign vectors")->check(CLI::PositiveNumber);
  fp->add_option("--r0", o.r0, "Start of the iteration (default: certified from 1)");
  fp->add_option("--epsilon", o.epsilon, "Relative stopping tolerance");
  fp->add_option("--max-iter", o.max_iter, "Iteration cap");

  auto* bd = app.add_subcommand("bound", "Evaluate a bound calculator by theorem id");
  add_common(*bd, o);
  bd->add_option("--theorem", o.theorem, "Theorem id")->required();
  bd->add_option("--part", o.part, "Part of 3.3 (1 or 2)")->check(CLI::IsMember({1, 2}));
  bd->add_option("--alpha", o.alpha, "alpha (2.1: optimized when omitted)");
  bd->add_option("--variant", o.variant, "2.1: expected|conditional; A.2: upper|lower");
  bd->add_option("--direction", o.direction, "p-vs-pn or pn-vs-p")
      ->check(CLI::IsMember({"p-vs-pn", "pn-vs-p"}));
  bd->add_option("--complexity", o.complexity, "Rademacher term for 2.1");
  bd->add_option("--l-star", o.l_star, "L* for 5.2");
  bd->add_option("--c", o.c, "Constant c for 5.2 or 6.2, Bennett scale for A.1");
  bd->add_option("--a", o.range_lo, "Range lower end a");
  bd->add_option("--b", o.range_hi, "Range upper end b");
  bd->add_option("--sigma-sq", o.sigma_sq, "A.1 variance");
  bd->add_option("--ez", o.ez, "Expected supremum EZ");
  bd->add_option("--deviation", o.deviation, "A.1 deviation");
  bd->add_option("--value", o.value, "A.4 input average");
  bd->add_option("--mode", o.mode, "A.4 direction")
      ->check(CLI::IsMember({"expected-from-conditional", "conditional-from-expected"}));
  bd->add_option("--curve", o.curve, "2.2/3.6: CSV r,complexity");
  bd->add_option("--envelope", o.envelope, "2.2: envelope b");

  auto* cl = app.add_subcommand("classify", "Classification bound from weighted ERM");
  add_common(*cl, o);
  cl->add_option("--data", o.data, "CSV with columns x,label")->required();
  cl->add_option("--instance", o.instance, "Predictors over a ground space (non-numeric x)");
  cl->add_option("--method", o.method, "cor62 or thm63")->check(CLI::IsMember({"auto", "cor62", "thm63"}));
  cl->add_option("--c", o.c, "Replace the default constants by c K (r* + x/n)");

  auto* kr = app.add_subcommand("kernel", "Gram spectrum, eigenvalue bounds and excess-risk assembly");
  add_common(*kr, o);
  kr->add_option("--gram", o.gram_file, "CSV n x n normalized Gram matrix");
  kr->add_option("--features", o.features, "CSV of feature vectors");
  kr->add_option("--kernel", o.kernel, "Kernel")->check(CLI::IsMember({"linear", "polynomial", "gaussian"}));
  kr->add_option("--width", o.width, "Gaussian width");
  kr->add_option("--degree", o.degree, "Polynomial degree");
  kr->add_option("--offset", o.offset, "Polynomial offset");

  auto* va = app.add_subcommand("validate", "Randomized validation trials by claim id");
  add_common(*va, o);
  va->add_option("--claim", o.claim, "Claim id")->required();
  va->add_option("--instance", o.instance, "Instance file (default: built-in instance)");
  va->add_option("--data-draws", o.data_draws, "Samples for population averages")->check(CLI::PositiveNumber);
  va->add_option("--sigma-draws", o.sigma_draws, "Sign vectors per trial")->check(CLI::PositiveNumber);
  va->add_flag("--informational", o.informational, "Run even when a precondition fails");
  va->add_flag("--no-fit", o.no_fit, "Skip the scaling fit over n");
  va->add_flag("--margins", o.margins, "Include per-trial margins in the JSON report");

  try {
    std::vector<std::string> argv = apply_config(args, app);
    std::vector<std::string> rest(argv.rbegin(), argv.rend() - 1);
    try {
      app.parse(std::move(rest));
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? 0 : 1;
    }
    std::string report;
    if (rad->parsed()) report = cmd_rademacher(o);
    else if (fp->parsed()) report = cmd_fixed_point(o);
    else if (bd->parsed()) report = cmd_bound(o);
    else if (cl->parsed()) report = cmd_classify(o);
    else if (kr->parsed()) report = cmd_kernel(o);
    else report = cmd_validate(o);
    if (o.out.empty()) out << report;
    else write_text_file(o.out, report);
    return 0;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const LookupError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace locrad::cli
