#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <type_traits>
#include <vector>

#include "agents.hpp"
#include "attackers.hpp"
#include "bounds.hpp"
#include "engine.hpp"

// Omniscient checks of the high-probability events behind the cost and
// regret guarantees. These runs additionally track per-(chosen, pulled) sums,
// so they are slower than plain experiments.

namespace bandit_lab {

// Radius for the empirical mean of the rewards of pulled arm j among rounds
// where arm i was chosen:
//   sqrt(2 sigma^2 / N * log(pi^2 K^2 N^2 / (3 delta)))
inline double cross_radius(std::uint64_t n, double sigma, std::size_t arm_count, double delta) {
  detail::require(n >= 1, "cross_radius needs N >= 1");
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(arm_count);
  return std::sqrt(2.0 * sigma * sigma / nn *
                   std::log(std::numbers::pi * std::numbers::pi * k * k * nn * nn / (3.0 * delta)));
}

struct SandwichSample {
  std::uint64_t round = 0;
  double spread = 0.0;
  GapSandwich bounds;

  bool holds() const { return spread <= bounds.lower_expr && bounds.lower_expr <= bounds.upper_cap; }
};

struct OmniscientTrial {
  bool e1_violated = false;
  bool e2_violated = false;
  bool lemma3_violated = false;
  std::vector<SandwichSample> sandwich;
};

// Tracks, for every round t > K:
//   E1: |mean0_i - mu_i| < CB(N0_i) for every arm,
//   E2: |mean_{i,j} - mu_j| < cross_radius(N_{i,j}) for every cell,
//   the drift bound |mean_i - sum_j N_{i,j} mu_j / N_i| < beta(N_i).
// Only the arm/cell touched in a round can change, so after a full sweep at
// t = K + 1 each round checks one arm and one cell.
class OmniscientObserver {
 public:
  OmniscientObserver(const BanditInstance& instance, double delta)
      : instance_(instance), delta_(delta), k_(instance.arm_count()), cross_sums_(k_ * k_, 0.0) {}

  template <class Agent, class Attacker>
  void on_step(const StepRecord& rec, const Agent& agent, const Attacker& attacker, const TrialTrace& trace) {
    cross_sums_[rec.chosen * k_ + rec.post] += rec.reward;
    if (rec.round <= k_) return;
    if (rec.round == k_ + 1) {
      for (Arm i = 0; i < k_; ++i) {
        check_attacker_arm(attacker.state.stats, i);
        check_user_arm(agent.stats, trace, i);
        for (Arm j = 0; j < k_; ++j) check_cell(trace, i, j);
      }
      return;
    }
    check_attacker_arm(attacker.state.stats, rec.post);
    check_user_arm(agent.stats, trace, rec.chosen);
    check_cell(trace, rec.chosen, rec.post);
  }

  template <class Agent, class Attacker>
  void on_checkpoint(const Checkpoint& cp, const Agent& agent, const Attacker&, const TrialTrace&) {
    if constexpr (std::is_same_v<Agent, MoucbAgentState>) {
      const auto& p = agent.params;
      if (p.budget_bound >= 1 && cp.round > 2 * p.budget_bound * k_) {
        const double spread = gap(instance_, instance_.best_arm(), instance_.worst_arm());
        result_.sandwich.push_back(SandwichSample{cp.round, spread, lemma5_gap_bounds(agent, spread)});
      }
    }
  }

  const OmniscientTrial& result() const noexcept { return result_; }

 private:
  void check_attacker_arm(const ArmStats& s, Arm i) {
    if (result_.e1_violated || s.counts[i] == 0) return;
    const double dev = std::abs(s.mean(i) - instance_.means()[i]);
    if (dev >= cb(s.counts[i], instance_.sigma(), k_, delta_)) result_.e1_violated = true;
  }

  void check_cell(const TrialTrace& trace, Arm i, Arm j) {
    if (result_.e2_violated) return;
    const std::uint64_t n = trace.cross(i, j);
    if (n == 0) return;
    const double m = cross_sums_[i * k_ + j] / static_cast<double>(n);
    if (std::abs(m - instance_.means()[j]) >= cross_radius(n, instance_.sigma(), k_, delta_)) {
      result_.e2_violated = true;
    }
  }

  void check_user_arm(const ArmStats& s, const TrialTrace& trace, Arm i) {
    if (result_.lemma3_violated || s.counts[i] == 0) return;
    double pulled_mean = 0.0;
    for (Arm j = 0; j < k_; ++j) pulled_mean += static_cast<double>(trace.cross(i, j)) * instance_.means()[j];
    pulled_mean /= static_cast<double>(s.counts[i]);
    const double b = detail::beta_unchecked(static_cast<double>(s.counts[i]), instance_.sigma(),
                                            static_cast<double>(k_), delta_);
    if (std::abs(s.mean(i) - pulled_mean) >= b) result_.lemma3_violated = true;
  }

  const BanditInstance& instance_;
  double delta_;
  std::size_t k_;
  std::vector<double> cross_sums_;
  OmniscientTrial result_;
};

struct CoverageReport {
  std::uint64_t trials = 0;
  double e1_violation_rate = 0.0;
  double e2_violation_rate = 0.0;
  // Among trials where E2 held throughout.
  double lemma3_violation_rate = 0.0;
  std::uint64_t e2_holding_trials = 0;
};

// Runs `trials` omniscient trials of `cfg` (streams 0..trials-1) using the
// attacker's delta for every radius.
inline std::vector<OmniscientTrial> run_omniscient(const ExperimentConfig& cfg, std::uint64_t trials,
                                                   unsigned threads = 1) {
  validate(cfg);
  std::vector<OmniscientTrial> out(trials);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    OmniscientObserver obs(cfg.instance, cfg.attacker.delta);
    run_trial(cfg, i, obs);
    out[i] = obs.result();
  });
  return out;
}

inline CoverageReport event_coverage_check(const ExperimentConfig& cfg, std::uint64_t trials, unsigned threads = 1) {
  detail::require(trials >= 100, "event coverage needs at least 100 trials");
  const auto runs = run_omniscient(cfg, trials, threads);
  CoverageReport rep;
  rep.trials = trials;
  std::uint64_t e1 = 0, e2 = 0, l3 = 0;
  for (const auto& r : runs) {
    e1 += r.e1_violated;
    e2 += r.e2_violated;
    if (!r.e2_violated) {
      ++rep.e2_holding_trials;
      l3 += r.lemma3_violated;
    }
  }
  const double m = static_cast<double>(trials);
  rep.e1_violation_rate = static_cast<double>(e1) / m;
  rep.e2_violation_rate = static_cast<double>(e2) / m;
  rep.lemma3_violation_rate =
      rep.e2_holding_trials == 0 ? 0.0 : static_cast<double>(l3) / static_cast<double>(rep.e2_holding_trials);
  return rep;
}

struct SandwichReport {
  std::uint64_t trials = 0;
  std::uint64_t e2_holding_trials = 0;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
};

// Checks spread <= lower_expr <= upper_cap at every post-warm-up checkpoint
// of every trial in which E2 held. Meaningful for MOUCB configs only.
inline SandwichReport lemma5_sandwich_check(const ExperimentConfig& cfg, std::uint64_t trials, unsigned threads = 1) {
  detail::require(cfg.agent.kind == AgentKind::moucb, "sandwich check needs a MOUCB agent");
  const auto runs = run_omniscient(cfg, trials, threads);
  SandwichReport rep;
  rep.trials = trials;
  for (const auto& r : runs) {
    if (r.e2_violated) continue;
    ++rep.e2_holding_trials;
    for (const auto& s : r.sandwich) {
      ++rep.samples;
      if (!s.holds()) ++rep.violations;
    }
  }
  return rep;
}

}  // namespace bandit_lab
