#pragma once

// Randomized validation of the probabilistic claims on finite instances where
// every population quantity (Pf, Pf^2, excess risk) is computed exactly.
// Trials are independent, seeded per trial index, and aggregated in order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locrad/bounds.hpp"
#include "locrad/empirical.hpp"

namespace locrad {

/// A ground space, a class tabulated over it and, for excess-risk claims,
/// a deterministic target y(x) per point (quadratic loss (f(x) - y(x))^2).
struct Instance {
  std::string name;
  DiscreteDistribution dist;
  TabulatedClass cls;
  std::vector<double> targets;
};

/// Default desk-scale instance for a claim id: 16 points with random masses
/// and 4 to 8 functions with range [0,1] or [-1,1]. Fixed across seeds.
Instance default_instance(std::string_view claim_id);

/// Sample size used when TrialConfig::n is 0.
std::size_t default_sample_size(std::string_view claim_id);

std::vector<std::string> known_claim_ids();

struct TrialConfig {
  std::string claim_id;
  std::optional<Instance> instance;  // default_instance(claim_id) when empty
  std::size_t n = 0;                 // default_sample_size(claim_id) when 0
  double x = 1.0;
  double K = 2.0;
  std::size_t num_trials = 1000;
  std::uint64_t seed = 0;
  std::size_t data_draws = 512;            // distribution-level averages
  std::size_t expected_sigma_draws = 64;   // signs per sample inside those averages
  std::size_t sigma_draws = 256;           // signs per trial for empirical averages
  bool enforce_precondition = true;        // sandwich: require r* >= c3 x/n
  bool fit_scaling = true;                 // excess risk: fit the L*/r* scaling over n
  double radius_scale = 1.0;               // containment: check at radius_scale * threshold
};

struct TrialReport {
  std::string claim_id;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  double claimed_rate = 0.0;  // k e^{-x}
  double slack_limit = 0.0;   // claimed + 3 sqrt(claimed (1 - claimed)/trials) + 10/trials
  bool within_slack = true;
  bool skipped = false;
  bool precondition_met = true;
  std::vector<double> margins;  // bound - actual, per trial
  double mean_margin = 0.0;
  double min_margin = 0.0;
  double max_margin = 0.0;
  NamedValues details;
  std::vector<std::string> notes;
};

/// claimed + 3 sqrt(c(1-c)/trials) + 10/trials, with c clamped to [0, 1].
double binomial_slack_limit(double claimed_rate, std::size_t trials);

/// Ball containment: population ball inside the doubled empirical ball
/// (claim "2.2") or empirical star-hull ball inside the doubled population
/// one (claim "3.6").
TrialReport validate_containment(const TrialConfig& config);

/// Uniform bound Pf <= K/(K-1) P_n f + additive term; theorem "3.3-1",
/// "3.3-2" or "4.1".
TrialReport validate_main_bound(const TrialConfig& config, std::string_view theorem);

/// r* <= r_hat* <= 9(1 + c1)^2 r* (claim "4.2").
TrialReport validate_sandwich(const TrialConfig& config);

/// Excess risk of empirical minimization against the data-dependent bound
/// (claim "5.4"), plus a least-squares fit of the L*/r* scaling over n.
TrialReport validate_excess_risk(const TrialConfig& config);

/// Dispatches on config.claim_id.
TrialReport validate(const TrialConfig& config);

}  // namespace locrad
