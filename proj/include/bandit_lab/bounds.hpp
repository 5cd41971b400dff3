#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "agents.hpp"
#include "env.hpp"
#include "error.hpp"

// Closed-form cost and regret bounds. These take ground-truth gaps and are
// meant for analysis only; no agent or attacker ever calls them.

namespace bandit_lab {

struct BoundInputs {
  std::size_t arm_count = 0;
  double sigma = 0.0;
  double delta = 0.05;
  double horizon = 0.0;
  double budget_bound = 0.0;
  // Delta_{target, worst}.
  double target_gap = 0.0;
  // Delta_{j, worst} for every arm j other than the worst one.
  std::vector<double> gaps_to_worst;
  // Delta_{best, a} for every arm a other than the best one.
  std::vector<double> gaps_from_best;
  // Delta_{best, worst}.
  double spread = 0.0;

  static BoundInputs from_instance(const BanditInstance& instance, Arm target, double delta, double horizon,
                                   double budget_bound = 0.0) {
    instance.check_arm(target);
    BoundInputs in;
    in.arm_count = instance.arm_count();
    in.sigma = instance.sigma();
    in.delta = delta;
    in.horizon = horizon;
    in.budget_bound = budget_bound;
    const Arm worst = instance.worst_arm();
    const Arm best = instance.best_arm();
    in.target_gap = gap(instance, target, worst);
    in.spread = gap(instance, best, worst);
    for (Arm j = 0; j < instance.arm_count(); ++j) {
      if (j != worst) in.gaps_to_worst.push_back(gap(instance, j, worst));
      if (j != best) in.gaps_from_best.push_back(gap(instance, best, j));
    }
    return in;
  }
};

// Smallest horizon at which the attack-cost bound applies: (pi^2 K / (3 delta))^(2/5).
inline double theorem1_min_horizon(std::size_t arm_count, double delta) {
  return std::pow(std::numbers::pi * std::numbers::pi * static_cast<double>(arm_count) / (3.0 * delta), 0.4);
}

// Upper bound on the LCB attack cost against UCB after `horizon` rounds,
// holding with probability at least 1 - 2 delta.
inline double theorem1_cost_bound(const BoundInputs& in) {
  if (!(in.target_gap > 0.0)) {
    throw ContractViolation("cost bound needs a target arm that is not the worst arm");
  }
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw ContractViolation("cost bound needs delta in (0, 1)");
  if (in.horizon < theorem1_min_horizon(in.arm_count, in.delta)) {
    throw ContractViolation("horizon below the cost bound's validity threshold");
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double k = static_cast<double>(in.arm_count);
  const double s2 = in.sigma * in.sigma;
  const double t = in.horizon;

  const double x = 3.0 * in.sigma * std::sqrt(std::log(t)) + std::sqrt(2.0 * s2 * k * std::log(pi2 * t * t / (3.0 * in.delta)));
  double inv_gap_sum = 0.0;
  for (double g : in.gaps_to_worst) {
    if (!(g > 0.0)) throw ContractViolation("cost bound needs a unique worst arm");
    inv_gap_sum += 8.0 * s2 / g;
  }
  const double spread_term = inv_gap_sum * std::log(pi2 * k * t * t / (3.0 * in.delta));
  const double root = x + std::sqrt(x * x + 4.0 * in.target_gap * spread_term);
  return (k - 1.0) / (4.0 * in.target_gap * in.target_gap) * root * root;
}

// 8 sqrt(sigma^2 K / A * log(4 pi^2 A^2 / (3 delta))): the estimation slack
// left after the 2A-pull warm-up.
inline double moucb_warmup_slack(double sigma, std::size_t arm_count, double budget_bound, double delta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 8.0 * std::sqrt(sigma * sigma * static_cast<double>(arm_count) / budget_bound *
                         std::log(4.0 * pi2 * budget_bound * budget_bound / (3.0 * delta)));
}

// Upper bound on MOUCB pseudo-regret with total attack cost at most A,
// holding with probability at least 1 - delta.
inline double theorem3_regret_bound(const BoundInputs& in) {
  if (!(in.delta > 0.0) || in.delta > 1.0 / 3.0) throw ContractViolation("regret bound needs 0 < delta <= 1/3");
  if (!(in.budget_bound >= 1.0)) throw ContractViolation("regret bound needs A >= 1");
  const double k = static_cast<double>(in.arm_count);
  if (in.horizon < 2.0 * in.budget_bound * k) throw ContractViolation("regret bound needs T >= 2AK");

  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double s2 = in.sigma * in.sigma;
  const double log_term = std::log(pi2 * in.horizon * in.horizon / (3.0 * in.delta));
  const double slack = moucb_warmup_slack(in.sigma, in.arm_count, in.budget_bound, in.delta);
  double total = 0.0;
  for (double g : in.gaps_from_best) {
    // A co-optimal arm costs nothing.
    if (g <= 0.0) continue;
    const double stochastic = 8.0 * s2 * k / g * log_term;
    const double adversarial = in.budget_bound * (g + 2.0 * in.spread + slack);
    total += std::max(stochastic, adversarial);
  }
  return total;
}

struct GapSandwich {
  // 2 max_{i,j} { mean_i - mean_j + beta(N_i) + beta(N_j) }
  double lower_expr = 0.0;
  // 2 Delta_{best,worst} + 8 sqrt(sigma^2 K / A * log(4 pi^2 A^2 / (3 delta)))
  double upper_cap = 0.0;
};

// Both sides of the estimated-spread sandwich. `spread` is the ground-truth
// Delta_{best,worst}; only the upper cap depends on it.
inline GapSandwich lemma5_gap_bounds(std::span<const double> means, std::span<const std::uint64_t> counts,
                                     double sigma, double delta, std::uint64_t budget_bound, double spread) {
  detail::require(means.size() == counts.size() && means.size() >= 2, "means and counts must describe the same arms");
  detail::require(budget_bound >= 1, "gap bounds need A >= 1");
  for (auto n : counts) detail::require(n >= 2 * budget_bound, "gap bounds need every N_i >= 2A");
  const std::size_t k = means.size();
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    const double b = moucb_beta(counts[a], sigma, k, delta);
    hi = std::max(hi, means[a] + b);
    lo = std::min(lo, means[a] - b);
  }
  GapSandwich out;
  out.lower_expr = 2.0 * (hi - lo);
  out.upper_cap = 2.0 * spread + moucb_warmup_slack(sigma, k, static_cast<double>(budget_bound), delta);
  return out;
}

inline GapSandwich lemma5_gap_bounds(const MoucbAgentState& state, double spread) {
  const auto& s = state.stats;
  std::vector<double> means(s.arm_count());
  for (Arm a = 0; a < s.arm_count(); ++a) means[a] = s.mean(a);
  return lemma5_gap_bounds(means, s.counts, state.params.sigma, state.params.delta, state.params.budget_bound, spread);
}

}  // namespace bandit_lab
