#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "env.hpp"
#include "error.hpp"

// Bandit policies. Each agent only ever sees the arm it chose and the reward
// it received; it never learns which arm actually produced the reward.

namespace bandit_lab {

// Pull counts and reward sums per arm, plus the number of completed rounds.
// Used for both the user's (pre-attack) and the attacker's (post-attack) view.
struct ArmStats {
  std::vector<std::uint64_t> counts;
  std::vector<double> sums;
  std::uint64_t rounds = 0;

  ArmStats() = default;
  explicit ArmStats(std::size_t arm_count) : counts(arm_count, 0), sums(arm_count, 0.0) {}

  std::size_t arm_count() const noexcept { return counts.size(); }

  double mean(Arm arm) const {
    detail::require(arm < counts.size(), "arm index out of range");
    detail::require(counts[arm] > 0, "empirical mean of an arm that was never pulled");
    return sums[arm] / static_cast<double>(counts[arm]);
  }

  void record(Arm arm, double reward) {
    detail::require(arm < counts.size(), "arm index out of range");
    ++counts[arm];
    sums[arm] += reward;
    ++rounds;
  }

  Arm least_pulled() const noexcept {
    Arm best = 0;
    for (Arm a = 1; a < counts.size(); ++a) {
      if (counts[a] < counts[best]) best = a;
    }
    return best;
  }

  std::uint64_t min_count() const noexcept { return counts[least_pulled()]; }

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

// --- UCB -------------------------------------------------------------------

struct UcbParams {
  double sigma = 0.1;
};

struct UcbAgentState {
  ArmStats stats;
  UcbParams params;

  UcbAgentState(std::size_t arm_count, UcbParams p) : stats(arm_count), params(p) {
    if (arm_count < 2) throw ConfigError("UCB needs at least 2 arms");
    if (!(p.sigma > 0.0)) throw ConfigError("UCB sigma must be positive");
  }
};

// Index of `arm` for the round being decided, t = rounds + 1:
//   mean_arm + 3 sigma sqrt(log t / N_arm)
inline double ucb_index(const UcbAgentState& state, Arm arm) {
  const auto& s = state.stats;
  detail::require(arm < s.arm_count(), "arm index out of range");
  detail::require(s.rounds >= s.arm_count() && s.min_count() >= 1,
                  "ucb_index queried before every arm was pulled once");
  const double t = static_cast<double>(s.rounds + 1);
  const double n = static_cast<double>(s.counts[arm]);
  return s.sums[arm] / n + 3.0 * state.params.sigma * std::sqrt(std::log(t) / n);
}

// Round-robin for the first K rounds, then argmax of the UCB index with ties
// to the lowest arm.
inline Arm ucb_select(const UcbAgentState& state) {
  const auto& s = state.stats;
  if (s.rounds < s.arm_count()) return static_cast<Arm>(s.rounds);
  const double log_t = std::log(static_cast<double>(s.rounds + 1));
  const double width = 3.0 * state.params.sigma;
  Arm best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (Arm a = 0; a < s.arm_count(); ++a) {
    const double n = static_cast<double>(s.counts[a]);
    const double index = s.sums[a] / n + width * std::sqrt(log_t / n);
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

// --- MOUCB -----------------------------------------------------------------

struct MoucbParams {
  double sigma = 0.1;
  double delta = 0.05;
  // Known upper bound A on the total attack cost. 0 means no attack expected.
  std::uint64_t budget_bound = 0;
};

namespace detail {

inline double beta_unchecked(double n, double sigma, double arm_count, double delta) {
  return std::sqrt(2.0 * sigma * sigma * arm_count / n *
                   std::log(std::numbers::pi * std::numbers::pi * n * n / (3.0 * delta)));
}

inline void check_moucb_delta(double delta) {
  if (!(delta > 0.0) || delta > 1.0 / 3.0) {
    throw ConfigError("MOUCB requires 0 < delta <= 1/3");
  }
}

}  // namespace detail

// Radius bounding how far the user's empirical mean can drift from the mean
// of the arms that actually produced its rewards:
//   beta(N) = sqrt(2 sigma^2 K / N * log(pi^2 N^2 / (3 delta)))
// Strictly decreasing in N when delta <= 1/3.
inline double moucb_beta(std::uint64_t n, double sigma, std::size_t arm_count, double delta) {
  detail::require(n >= 1, "moucb_beta needs N >= 1");
  detail::check_moucb_delta(delta);
  return detail::beta_unchecked(static_cast<double>(n), sigma, static_cast<double>(arm_count), delta);
}

struct MoucbAgentState {
  ArmStats stats;
  MoucbParams params;

  MoucbAgentState(std::size_t arm_count, MoucbParams p) : stats(arm_count), params(p) {
    if (arm_count < 2) throw ConfigError("MOUCB needs at least 2 arms");
    if (!(p.sigma > 0.0)) throw ConfigError("MOUCB sigma must be positive");
    detail::check_moucb_delta(p.delta);
  }

  // Rounds 1..warmup_rounds() pull the least-pulled arm. With A = 0 a single
  // sweep still runs so that every empirical mean exists.
  std::uint64_t warmup_rounds() const noexcept {
    const std::uint64_t k = stats.arm_count();
    return params.budget_bound == 0 ? k : 2 * params.budget_bound * k;
  }

  std::uint64_t warmup_pulls() const noexcept {
    return params.budget_bound == 0 ? 1 : 2 * params.budget_bound;
  }

  bool warmed_up() const noexcept { return stats.rounds >= warmup_rounds(); }
};

namespace detail {

// max over ordered pairs (i, j), i == j included, of
//   mean_i - mean_j + beta(N_i) + beta(N_j)
// which splits into max_i(mean_i + beta_i) - min_j(mean_j - beta_j).
inline double moucb_pair_max(const MoucbAgentState& state, std::span<const double> betas) {
  const auto& s = state.stats;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (Arm a = 0; a < s.arm_count(); ++a) {
    const double m = s.sums[a] / static_cast<double>(s.counts[a]);
    hi = std::max(hi, m + betas[a]);
    lo = std::min(lo, m - betas[a]);
  }
  return hi - lo;
}

inline void require_warm(const MoucbAgentState& state) {
  require(state.stats.min_count() >= state.warmup_pulls(), "MOUCB offset queried before warm-up finished");
}

}  // namespace detail

// Offset term for candidate `arm`:
//   (2A / N_arm) * max_{i,j} { mean_i - mean_j + beta(N_i) + beta(N_j) }
inline double moucb_gamma(const MoucbAgentState& state, Arm arm) {
  const auto& s = state.stats;
  detail::require(arm < s.arm_count(), "arm index out of range");
  detail::require_warm(state);
  const auto& p = state.params;
  std::vector<double> betas(s.arm_count());
  for (Arm a = 0; a < s.arm_count(); ++a) {
    betas[a] = detail::beta_unchecked(static_cast<double>(s.counts[a]), p.sigma,
                                      static_cast<double>(s.arm_count()), p.delta);
  }
  return 2.0 * static_cast<double>(p.budget_bound) / static_cast<double>(s.counts[arm]) *
         detail::moucb_pair_max(state, betas);
}

// Full MOUCB index mean_a + beta(N_a) + gamma_a for the next round.
inline double moucb_index(const MoucbAgentState& state, Arm arm) {
  detail::require_warm(state);
  const auto& s = state.stats;
  const auto& p = state.params;
  const double b = detail::beta_unchecked(static_cast<double>(s.counts[arm]), p.sigma,
                                          static_cast<double>(s.arm_count()), p.delta);
  return s.mean(arm) + b + moucb_gamma(state, arm);
}

// Least-pulled arm while t <= warmup_rounds() (t is the round being decided),
// then argmax of the MOUCB index. Ties go to the lowest arm in both phases.
inline Arm moucb_select(const MoucbAgentState& state) {
  const auto& s = state.stats;
  if (!state.warmed_up()) return s.least_pulled();

  const auto& p = state.params;
  const std::size_t k = s.arm_count();
  double betas_buf[64];
  std::vector<double> betas_heap;
  std::span<double> betas;
  if (k <= 64) {
    betas = std::span<double>(betas_buf, k);
  } else {
    betas_heap.resize(k);
    betas = betas_heap;
  }
  for (Arm a = 0; a < k; ++a) {
    betas[a] = detail::beta_unchecked(static_cast<double>(s.counts[a]), p.sigma, static_cast<double>(k), p.delta);
  }
  const double offset = 2.0 * static_cast<double>(p.budget_bound) * detail::moucb_pair_max(state, betas);

  Arm best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (Arm a = 0; a < k; ++a) {
    const double n = static_cast<double>(s.counts[a]);
    const double index = s.sums[a] / n + betas[a] + offset / n;
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

// --- Common ----------------------------------------------------------------

// Both policies learn the same way: credit the reward to the arm they chose.
template <class State>
  requires requires(State& s) { s.stats; }
void agent_update(State& state, Arm chosen_arm, double reward) {
  state.stats.record(chosen_arm, reward);
}

inline Arm select(const UcbAgentState& s) { return ucb_select(s); }
inline Arm select(const MoucbAgentState& s) { return moucb_select(s); }

}  // namespace bandit_lab
