#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "locrad/classification.hpp"
#include "locrad/harness.hpp"
#include "locrad/kernel.hpp"
#include "locrad/rademacher.hpp"

using namespace locrad;

namespace {

TabulatedClass random_class(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> rows(m, std::vector<double>(n));
  for (auto& row : rows)
    for (double& v : row) v = u(gen);
  return TabulatedClass::from_rows(rows, -1.0, 1.0);
}

}  // namespace

static void BM_ExactEnumeration(benchmark::State& state) {
  const auto cls = random_class(8, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_rademacher_exact(cls).value);
}
BENCHMARK(BM_ExactEnumeration)->DenseRange(8, 20, 4);

static void BM_MonteCarlo(benchmark::State& state) {
  const auto cls = random_class(16, 200, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(conditional_rademacher_mc(cls, static_cast<std::size_t>(state.range(0)), 3).value);
}
BENCHMARK(BM_MonteCarlo)->RangeMultiplier(4)->Range(256, 16384);

static void BM_StarHullFixedPoint(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto cls = random_class(8, n, 4);
  const SigmaProjections proj(cls, SigmaPlan::monte_carlo(256, 5));
  std::vector<double> q(cls.num_functions());
  for (std::size_t f = 0; f < q.size(); ++f) {
    for (double v : cls.row(f)) q[f] += v * v;
    q[f] /= static_cast<double>(n);
  }
  const SubRootEvaluator psi([&](double r) { return 20.0 * proj.star_hull(q, 2.0 * r).mean + 26.0 / n; });
  for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_point(psi, 1.0).r_star);
}
BENCHMARK(BM_StarHullFixedPoint)->Arg(50)->Arg(200)->Arg(800);

static void BM_Thm63(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(n);
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = u(gen);
    ys[i] = xs[i] + 0.2 * (u(gen) - 0.5) > 0.5 ? 1 : -1;
  }
  const auto erm = ErmOracle::threshold_stumps(xs);
  for (auto _ : state) benchmark::DoNotOptimize(thm63_psi_hat_upper(erm, ys, 0.05, 1.0, 7).value);
}
BENCHMARK(BM_Thm63)->Arg(12)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Jacobi(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(8);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> pts(n, std::vector<double>(2));
  for (auto& p : pts) p = {g(gen), g(gen)};
  const auto gm = gram(KernelSpec::gaussian(1.0), pts);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_spectrum(gm).eigenvalues.front());
}
BENCHMARK(BM_Jacobi)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

static void BM_ValidateMainBound(benchmark::State& state) {
  TrialConfig c;
  c.claim_id = "4.1";
  c.num_trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(validate(c).violations);
}
BENCHMARK(BM_ValidateMainBound)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
