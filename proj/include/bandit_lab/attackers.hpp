#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "agents.hpp"
#include "env.hpp"
#include "error.hpp"

// Action-manipulation adversaries. An attacker sits between the user and the
// environment, sees the user's chosen arm, and decides which arm is actually
// pulled. It observes every reward together with the arm that produced it.

namespace bandit_lab {

// Attacker confidence radius
//   CB(N) = sqrt(2 sigma^2 / N * log(pi^2 K N^2 / (3 delta)))
inline double cb(std::uint64_t n, double sigma, std::size_t arm_count, double delta) {
  detail::require(n >= 1, "cb needs N >= 1");
  detail::require(delta > 0.0 && delta < 1.0, "cb needs delta in (0, 1)");
  const double nn = static_cast<double>(n);
  return std::sqrt(2.0 * sigma * sigma / nn *
                   std::log(std::numbers::pi * std::numbers::pi * static_cast<double>(arm_count) * nn * nn /
                            (3.0 * delta)));
}

enum class AttackerKind { none, oracle, lcb };

struct AttackerParams {
  Arm target = 0;
  double sigma = 0.1;
  double delta = 0.05;
  // Stop attacking once this many rounds have been manipulated.
  std::optional<std::uint64_t> cost_cap;
};

// Post-attack view: per-arm counts and sums of the arms that were really
// pulled, plus the attack cost spent so far.
struct AttackerState {
  ArmStats stats;
  AttackerParams params;
  std::uint64_t cost = 0;

  AttackerState(std::size_t arm_count, AttackerParams p) : stats(arm_count), params(p) {
    if (p.target >= arm_count) throw ConfigError("target arm out of range");
    if (!(p.sigma > 0.0)) throw ConfigError("attacker sigma must be positive");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw ConfigError("attacker delta must lie in (0, 1)");
  }

  bool budget_exhausted() const noexcept { return params.cost_cap && cost >= *params.cost_cap; }
};

// Never changes the arm.
struct NullAttacker {
  AttackerState state;

  NullAttacker(std::size_t arm_count, AttackerParams p) : state(arm_count, p) {}

  static constexpr AttackerKind kind = AttackerKind::none;

  Arm attack(Arm chosen) const noexcept { return chosen; }
};

// Knows the ground-truth worst arm and redirects every non-target pull there.
struct OracleAttacker {
  AttackerState state;
  Arm worst;

  OracleAttacker(const BanditInstance& instance, AttackerParams p)
      : state(instance.arm_count(), p), worst(instance.worst_arm()) {}

  static constexpr AttackerKind kind = AttackerKind::oracle;

  Arm attack(Arm chosen) const noexcept {
    if (chosen == state.params.target || state.budget_exhausted()) return chosen;
    return worst;
  }
};

// Leaves the first K rounds and every target pull alone. Otherwise redirects
// to the arm with the smallest lower confidence bound mean0_i - CB(N0_i),
// searching over all arms including the target.
class LcbAttacker {
 public:
  LcbAttacker(std::size_t arm_count, AttackerParams p)
      : state(arm_count, p), lcb_(arm_count, -std::numeric_limits<double>::infinity()) {}

  static constexpr AttackerKind kind = AttackerKind::lcb;

  AttackerState state;

  Arm attack(Arm chosen) const noexcept {
    const std::uint64_t t = state.stats.rounds + 1;
    if (t <= state.stats.arm_count() || chosen == state.params.target || state.budget_exhausted()) {
      return chosen;
    }
    return lowest_lcb();
  }

  // Arms never observed have LCB = -inf, so they win the argmin.
  double lower_confidence_bound(Arm arm) const { return lcb_.at(arm); }

  Arm lowest_lcb() const noexcept {
    Arm best = 0;
    for (Arm a = 1; a < lcb_.size(); ++a) {
      if (lcb_[a] < lcb_[best]) best = a;
    }
    return best;
  }

  void refresh(Arm arm) {
    const auto& s = state.stats;
    lcb_[arm] = s.mean(arm) - cb(s.counts[arm], state.params.sigma, s.arm_count(), state.params.delta);
  }

 private:
  std::vector<double> lcb_;
};

template <class Attacker>
Arm attack(const Attacker& attacker, Arm chosen_arm) {
  return attacker.attack(chosen_arm);
}

// Record that `post_arm` was pulled in place of `chosen_arm` and yielded `reward`.
template <class Attacker>
void attacker_update(Attacker& attacker, Arm chosen_arm, Arm post_arm, double reward) {
  auto& st = attacker.state;
  st.stats.record(post_arm, reward);
  if (post_arm != chosen_arm) ++st.cost;
  if constexpr (requires { attacker.refresh(post_arm); }) attacker.refresh(post_arm);
}

}  // namespace bandit_lab
