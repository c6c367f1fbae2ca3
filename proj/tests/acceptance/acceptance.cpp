// Acceptance run: one PASS/FAIL line per criterion, with detail lines
// indented beneath. Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "locrad/bounds.hpp"
#include "locrad/classification.hpp"
#include "locrad/harness.hpp"
#include "locrad/io.hpp"
#include "locrad/kernel.hpp"
#include "locrad/rademacher.hpp"
#include "locrad/subroot.hpp"
#include "oracles.hpp"

using namespace locrad;

namespace {

int failures = 0;

void verdict(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& line) {
  std::printf("        %s\n", line.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

struct Golden {
  const char* id;
  double B, L;
  const char* key;
  double value;
};

void constants_fidelity() {
  // Transcribed by hand; B-dependent entries at B = 1 (c1 = 20) and B = 15 (c1 = 30).
  const Golden table[] = {
      {"3.3-1", 1, 1, "c1", 704},
      {"3.3-1", 1, 1, "c2", 26},
      {"3.3-2", 1, 1, "c1", 6},
      {"3.3-2", 1, 1, "c2", 5},
      {"4.1", 1, 1, "c1", 20},
      {"4.1", 1, 1, "c2", 31},
      {"4.1", 15, 1, "c1", 30},
      {"4.1", 15, 1, "c2", 41},
      {"4.2", 1, 1, "c1", 20},
      {"4.2", 1, 1, "c2", 13},
      {"4.2", 1, 1, "c3", 26},
      {"4.2", 1, 1, "sandwich", 3969},
      {"4.2", 10, 1, "sandwich", 3969},
      {"4.2", 15, 1, "c3", 26},
      {"4.2", 15, 1, "sandwich", 9 * 31 * 31},
      {"4.2", 40, 1, "c3", (13.0 + 160.0) / 3.0},
      {"5.1", 1, 1, "psi_factor", 20},
      {"5.1", 1, 1, "psi_x", 13},
      {"5.3", 1, 1, "r_factor", 705},
      {"5.3", 1, 1, "x_L", 11},
      {"5.3", 1, 1, "x_B", 27},
      {"5.4", 1, 1, "c1", 20},
      {"5.4", 1, 1, "c2", 31},
      {"5.4", 1, 1, "c3", 2824.0 + 4.0 * 38.0 / 31.0},
      {"5.4", 2, 3, "c1", 180},
      {"5.4", 2, 3, "c2", 279},
      {"5.4", 2, 3, "c3", 2824.0 + 8.0 * 87.0 / 279.0},
      {"5.4", 1, 1, "r_factor", 705},
  };
  std::size_t exact = 0, total = 0;
  for (const auto& g : table) {
    ++total;
    const double got = lookup(constants_for(g.id, g.B, g.L), g.key);
    if (got == g.value) ++exact;
    else info(std::string(g.id) + " " + g.key + ": got " + num(got) + ", want " + num(g.value));
  }
  verdict(1, "constants fidelity", exact == total, std::to_string(exact) + "/" + std::to_string(total) + " exact");
}

void rademacher_oracle_agreement() {
  std::mt19937_64 gen(20240601);
  int within = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + gen() % 11;
    const std::size_t m = 1 + gen() % 16;
    const auto rows = oracle::random_rows(gen, m, n, -1.0, 1.0);
    const auto cls = TabulatedClass::from_rows(rows, -1.0, 1.0);
    const double exact = oracle::conditional_average(rows, n);
    const auto mc = conditional_rademacher_mc(cls, 4096, gen());
    const double z = mc.std_error > 0.0 ? std::abs(mc.value - exact) / mc.std_error
                                        : (mc.value == exact ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    if (z <= 4.0) ++within;
  }
  verdict(2, "Rademacher oracle agreement", within >= 49,
          std::to_string(within) + "/50 within 4 std errors (worst " + num(worst) + ")");
}

void subroot_suite() {
  std::mt19937_64 gen(77);
  int star_ok = 0;
  const auto grid = geometric_grid(1e-6, 4.0, 50);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + gen() % 40;
    const auto rows = oracle::random_rows(gen, 1 + gen() % 10, n, -1.0, 1.0);
    const auto cls = TabulatedClass::from_rows(rows, -1.0, 1.0);
    const SigmaProjections proj(cls, SigmaPlan::monte_carlo(64, gen()));
    std::vector<double> q;
    for (const auto& row : rows) q.push_back(oracle::mean_sq(row));
    bool ok = true;
    double prev_ratio = INFINITY, prev = 0.0;
    for (double r : grid) {
      const double v = proj.star_hull(q, r).mean;
      const double ratio = v / std::sqrt(r);
      if (v < prev * (1.0 - 1e-14) || ratio > prev_ratio * (1.0 + 1e-14)) ok = false;
      prev = v;
      prev_ratio = ratio;
    }
    star_ok += ok;
  }
  int analytic_ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::uniform_real_distribution<double> u(0.01, 3.0);
    const double a = u(gen), b = 0.3 * u(gen);
    const double s = (a + std::sqrt(a * a + 4.0 * b)) / 2.0, rs = s * s;
    const auto psi = SubRootEvaluator::sqrt_affine(a, b);
    bool ok = true;
    for (double r : geometric_grid(rs * 1e-3, rs * 1e3, 50)) {
      if (r < rs * (1 - 1e-9) && !(psi(r) > r)) ok = false;
      if (r > rs * (1 + 1e-9) && !(psi(r) < r)) ok = false;
    }
    const double r0 = rs * (2.0 + 1000.0 * u(gen));
    const auto res = fixed_point_iterate(psi, r0, 1e-12, 300);
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
      const double bound = std::pow(r0 / rs, std::pow(2.0, -static_cast<double>(k))) * rs;
      const double excess = (res.trace[k] - bound) / bound;
      worst = std::max(worst, excess);
      if (excess > 1e-9) ok = false;
    }
    analytic_ok += ok;
  }
  verdict(3, "sub-root suite", star_ok == 100 && analytic_ok == 100,
          "star-hull ratio monotone on " + std::to_string(star_ok) + "/100; sign pattern and trace bound on " +
              std::to_string(analytic_ok) + "/100 (worst relative trace excess " + num(worst) + ")");
}

void fixed_point_accuracy() {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double eps = 1e-6;
  int ok = 0;
  double worst = 0.0, worst_returned = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double a = 0.01 + 5.0 * u(gen), b = 2.0 * u(gen);
    const double s = (a + std::sqrt(a * a + 4.0 * b)) / 2.0, rs = s * s;
    const double r0 = rs * (1.5 + 1e4 * u(gen));
    const auto res = fixed_point_iterate(SubRootEvaluator::sqrt_affine(a, b), r0, eps, 1000);
    const std::size_t budget = iterations_needed(r0, rs, eps);
    // The iterate at the Lemma 6.1 count, or the last one computed if the
    // stopping rule fired earlier.
    const std::size_t k = std::min(budget, res.trace.size() - 1);
    const double rel = std::abs(res.trace[k] - rs) / rs;
    worst = std::max(worst, rel);
    worst_returned = std::max(worst_returned, std::abs(res.r_star - rs) / rs);
    if (res.converged && res.iterations <= budget && rel <= 1e-6) ++ok;
  }
  verdict(4, "fixed-point accuracy", ok == 100,
          std::to_string(ok) + "/100 within 1e-6 at the iteration bound (worst " + num(worst) +
              "; stopping-rule value worst " + num(worst_returned) + ")");
}

void lemma64_exactness() {
  std::mt19937_64 gen(64);
  int checks = 0, bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + gen() % 6;
    const std::size_t m = 1 + gen() % 8;
    oracle::Rows rows(m, std::vector<double>(n));
    for (auto& row : rows)
      for (double& v : row) v = gen() % 2 ? 1.0 : -1.0;
    std::vector<int> ys(n);
    for (int& y : ys) y = gen() % 2 ? 1 : -1;
    const auto cls = TabulatedClass::from_rows(rows, -1.0, 1.0);
    for (std::size_t k = 0; k <= n; ++k) {
      const auto res = lemma64_identity(cls, ys, static_cast<double>(k) / static_cast<double>(n));
      if (res.empty) continue;
      ++checks;
      const double d = std::abs(res.lhs - res.rhs);
      worst = std::max(worst, d);
      if (d > 1e-12) ++bad;
    }
  }
  verdict(5, "Lemma 6.4 exactness", bad == 0,
          std::to_string(checks) + " feasible (instance, b) pairs, " + std::to_string(bad) +
              " beyond 1e-12 (worst " + num(worst) + ")");
}

void thm63_dominance() {
  std::mt19937_64 gen(63);
  int checks = 0, bad = 0;
  double tightest = INFINITY;
  const auto rgrid = geometric_grid(1e-3, 0.5, 20);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + gen() % 5;
    oracle::Rows rows(1 + gen() % 6, std::vector<double>(n));
    for (auto& row : rows)
      for (double& v : row) v = gen() % 2 ? 1.0 : -1.0;
    std::vector<int> ys(n);
    for (int& y : ys) y = gen() % 2 ? 1 : -1;
    const auto erm = ErmOracle::finite_class(TabulatedClass::from_rows(rows, -1.0, 1.0));
    oracle::Rows losses;
    for (const auto& row : rows) {
      std::vector<double> l(n);
      for (std::size_t i = 0; i < n; ++i) l[i] = row[i] != ys[i] ? 1.0 : 0.0;
      losses.push_back(l);
    }
    for (double r : rgrid) {
      const double direct = 20.0 * oracle::loss_alpha_sup(losses, n, r) + 26.0 / static_cast<double>(n);
      const double upper = thm63_psi_hat_upper(erm, ys, r, 1.0, 1).value;
      ++checks;
      tightest = std::min(tightest, upper - direct);
      if (upper < direct - 1e-12) ++bad;
    }
  }
  verdict(6, "Theorem 6.3 dominance", bad == 0,
          std::to_string(bad) + " violations in " + std::to_string(checks) + " checks (smallest gap " +
              num(tightest) + ")");
}

void kernel_spectra() {
  double worst = 0.0;
  auto compare = [&](const GramMatrix& g, std::vector<double> want) {
    std::sort(want.rbegin(), want.rend());
    const auto got = eigen_spectrum(g).eigenvalues;
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  };
  const std::size_t n = 6;
  std::vector<double> id(n * n, 0.0), diag(n * n, 0.0), r1(n * n);
  const std::vector<double> d{0.5, 0.1, 0.3, 0.0, 0.25, 0.05};
  const std::vector<double> u{1.0, -2.0, 0.5, 3.0, 0.0, 1.5};
  double uu = 0.0;
  for (double v : u) uu += v * v;
  for (std::size_t i = 0; i < n; ++i) {
    id[i * n + i] = 1.0;
    diag[i * n + i] = d[i];
    for (std::size_t j = 0; j < n; ++j) r1[i * n + j] = u[i] * u[j];
  }
  compare(GramMatrix(n, id), std::vector<double>(n, 1.0));
  compare(GramMatrix(n, diag), d);
  std::vector<double> r1_want(n, 0.0);
  r1_want[0] = uu;
  compare(GramMatrix(n, r1), r1_want);
  const auto half = eigen_spectrum(GramMatrix(2, {0.5, 0.0, 0.0, 0.5}));
  const double l66 = lemma66_bound(half, 2, 0.125);
  const auto c67 = cor67_complexity(supplied_spectrum({0.4, 0.2, 0.1, 0.05}, std::nullopt), 4);
  const bool ok = worst <= 1e-10 && l66 == 0.5 && c67.h == 0 && std::abs(c67.r_bound - 0.4330127018922193) <= 1e-9;
  verdict(7, "kernel spectrum correctness", ok,
          "fixture error " + num(worst) + "; lemma66 " + num(l66) + "; cor67 " + num(c67.r_bound) + " at h = " +
              std::to_string(c67.h));
}

void probabilistic_validity() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  bool sandwich_precondition = true;
  const char* claims[] = {"2.2", "3.6", "3.3-1", "3.3-2", "4.1", "4.2", "5.4"};
  struct Run {
    double x;
    std::size_t trials;
  };
  for (const Run run : {Run{1.0, 1000}, Run{2.0, 1000}, Run{10.0, 10000}}) {
    for (const char* id : claims) {
      TrialConfig c;
      c.claim_id = id;
      c.x = run.x;
      c.num_trials = run.trials;
      c.seed = 2026;
      c.fit_scaling = std::string(id) == "5.4" && run.x == 1.0;
      c.enforce_precondition = false;
      const auto r = validate(c);
      const bool zero_needed = run.x == 10.0;
      bool pass = !r.skipped && r.within_slack && (!zero_needed || r.violations == 0);
      if (std::string(id) == "4.2" && !r.precondition_met) {
        sandwich_precondition = false;
        pass = false;
      }
      ok = ok && pass;
      std::string line = std::string(id) + " x=" + num(run.x) + " trials=" + std::to_string(r.trials) +
                         ": violations " + std::to_string(r.violations) + ", rate " + num(r.violation_rate) +
                         " <= limit " + num(r.slack_limit) + (r.within_slack ? "" : " BREACH") +
                         ", mean margin " + num(r.mean_margin);
      if (r.skipped) line += ", skipped";
      if (std::string(id) == "4.2") {
        line += ", precondition " + std::string(r.precondition_met ? "met" : "not met");
        for (const auto& [k, v] : r.details)
          if (k == "r_star" || k == "r_star_min") line += ", " + k + " " + num(v);
      }
      for (const auto& [k, v] : r.details)
        if (k == "c_fit") line += ", c_fit " + num(v);
      info(line);
    }
  }
  std::string detail = ok ? "all claims within binomial slack; zero violations at x = 10"
                          : "see lines above";
  if (!sandwich_precondition)
    detail += "; the sandwich precondition r* >= c3 x/n cannot hold on the default family, sandwich run informational";
  verdict(8, "probabilistic validity", ok, detail + " (" + num(seconds_since(t0)) + " s)");
}

// Exact expectation over every ordered sample of size n from a small ground space.
void symmetrization_and_contraction() {
  std::mt19937_64 gen(65);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  int sym_checks = 0, sym_bad = 0;
  double sym_gap = INFINITY;
  for (int t = 0; t < 30; ++t) {
    const std::size_t N = 2 + gen() % 2;
    const std::size_t n = 1 + gen() % 5;
    std::vector<double> mass(N);
    double total = 0.0;
    for (double& w : mass) total += (w = u(gen));
    for (double& w : mass) w /= total;
    const auto cls = oracle::random_rows(gen, 1 + gen() % 4, N, -1.0, 1.0);
    std::vector<double> pf(cls.size(), 0.0);
    for (std::size_t f = 0; f < cls.size(); ++f)
      for (std::size_t i = 0; i < N; ++i) pf[f] += mass[i] * cls[f][i];
    double e_dev = 0.0, e_rad = 0.0;
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= N;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<std::size_t> idx(n);
      double prob = 1.0;
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        idx[i] = c % N;
        c /= N;
        prob *= mass[idx[i]];
      }
      oracle::Rows rows;
      double dev = -INFINITY;
      for (std::size_t f = 0; f < cls.size(); ++f) {
        std::vector<double> row(n);
        double pn = 0.0;
        for (std::size_t i = 0; i < n; ++i) pn += (row[i] = cls[f][idx[i]]);
        dev = std::max(dev, pf[f] - pn / static_cast<double>(n));
        rows.push_back(std::move(row));
      }
      e_dev += prob * dev;
      e_rad += prob * oracle::conditional_average(rows, n);
    }
    ++sym_checks;
    sym_gap = std::min(sym_gap, 2.0 * e_rad - e_dev);
    if (e_dev > 2.0 * e_rad + 1e-12) ++sym_bad;
  }
  int con_checks = 0, con_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + gen() % 10;
    const auto rows = oracle::random_rows(gen, 1 + gen() % 8, n, -1.0, 1.0);
    auto squashed = rows;
    for (auto& row : squashed)
      for (double& v : row) v = 0.5 * v * v;
    ++con_checks;
    if (oracle::conditional_average(squashed, n) > oracle::conditional_average(rows, n) + 1e-12) ++con_bad;
  }
  verdict(9, "symmetrization and contraction", sym_bad == 0 && con_bad == 0,
          "symmetrization " + std::to_string(sym_bad) + "/" + std::to_string(sym_checks) +
              " violations (smallest gap " + num(sym_gap) + "), contraction " + std::to_string(con_bad) + "/" +
              std::to_string(con_checks) + " violations");
}

std::string kernel_run(std::uint64_t seed, KernelPipelineResult* keep) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(64);
  for (auto& p : pts) p = {u(gen)};
  auto res = kernel_pipeline(KernelSpec::gaussian(0.5), pts, 1.0, 2.0, 1.0);
  std::string json = to_json(res);
  if (keep) *keep = std::move(res);
  return json;
}

void kernel_end_to_end() {
  KernelPipelineResult res{GramMatrix(1, {1.0}), {}, 0, 0, {}, {}, {}, {}};
  const std::string a = kernel_run(31, &res);
  const std::string b = kernel_run(31, nullptr);
  const auto& ev = res.spectrum.eigenvalues;
  info("leading eigenvalues " + num(ev[0]) + ", " + num(ev[1]) + ", " + num(ev[2]) + ", " + num(ev[3]) + ", " +
       num(ev[4]) + "; trace " + num(res.trace));
  const double r_hat = res.fixed_point.r_star;
  const double envelope = res.envelope;
  const bool below = r_hat <= envelope;
  const bool finite = std::isfinite(res.excess_risk.bound_value) && res.fixed_point.converged;
  const bool same = a == b;
  info("r_hat* " + num(r_hat) + " vs sqrt(trace/n) " + num(envelope) + ": " + (below ? "below" : "above") +
       "; the additive term (c2 + 2) x/n alone is " + num((lookup(constants_for("5.4", 1.0, 2.0), "c2") + 2.0) / 64.0));
  info("Theorem 5.4 bound " + num(res.excess_risk.bound_value) + (finite ? " (finite)" : " (not finite)") +
       "; JSON byte-identical across runs: " + (same ? "yes" : "no"));
  verdict(10, "end-to-end kernel pipeline", below && finite && same,
          std::string("envelope check ") + (below ? "met" : "not met") + ", finite report " + (finite ? "yes" : "no") +
              ", deterministic " + (same ? "yes" : "no"));
}

}  // namespace

int main() {
  constants_fidelity();
  rademacher_oracle_agreement();
  subroot_suite();
  fixed_point_accuracy();
  lemma64_exactness();
  thm63_dominance();
  kernel_spectra();
  probabilistic_validity();
  symmetrization_and_contraction();
  kernel_end_to_end();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
