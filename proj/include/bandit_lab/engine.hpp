#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "agents.hpp"
#include "attackers.hpp"
#include "env.hpp"
#include "error.hpp"

// The round loop (user -> attacker -> environment -> both learners), the
// omniscient trace recorder, and the multi-trial runner.

namespace bandit_lab {

enum class AgentKind { ucb, moucb };

inline std::string_view to_string(AgentKind k) { return k == AgentKind::ucb ? "ucb" : "moucb"; }

inline std::string_view to_string(AttackerKind k) {
  switch (k) {
    case AttackerKind::none:
      return "none";
    case AttackerKind::oracle:
      return "oracle";
    case AttackerKind::lcb:
      return "lcb";
  }
  return "?";
}

struct AgentConfig {
  AgentKind kind = AgentKind::ucb;
  double delta = 0.05;
  std::uint64_t budget_bound = 0;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

struct AttackerConfig {
  AttackerKind kind = AttackerKind::none;
  Arm target = 0;
  double delta = 0.05;
  std::optional<std::uint64_t> cost_cap;

  friend bool operator==(const AttackerConfig&, const AttackerConfig&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  BanditInstance instance;
  AgentConfig agent;
  AttackerConfig attacker;
  std::uint64_t horizon = 100000;
  std::uint64_t trials = 20;
  std::uint64_t master_seed = 1;
  // Empty means default_checkpoints(horizon).
  std::vector<std::uint64_t> checkpoints;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// 50 geometrically spaced rounds in [1, T], every power of ten up to T, and T.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  if (horizon == 0) return out;
  constexpr int points = 50;
  const double log_t = std::log(static_cast<double>(horizon));
  for (int i = 0; i < points; ++i) {
    const double r = std::round(std::exp(log_t * i / (points - 1)));
    out.push_back(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(r), 1, horizon));
  }
  for (std::uint64_t p = 1; p <= horizon; p *= 10) {
    out.push_back(p);
    if (p > horizon / 10) break;
  }
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::uint64_t> checkpoint_schedule(const ExperimentConfig& cfg) {
  if (cfg.checkpoints.empty()) return default_checkpoints(cfg.horizon);
  auto out = cfg.checkpoints;
  std::erase_if(out, [&](std::uint64_t r) { return r == 0 || r > cfg.horizon; });
  out.push_back(cfg.horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Throws ConfigError on invalid configs; returns non-fatal warnings.
inline std::vector<std::string> validate(const ExperimentConfig& cfg) {
  const std::size_t k = cfg.instance.arm_count();
  if (cfg.horizon < k) throw ConfigError("horizon must be at least the number of arms");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.attacker.target >= k) throw ConfigError("target arm out of range");
  if (!(cfg.attacker.delta > 0.0 && cfg.attacker.delta < 1.0)) throw ConfigError("attacker delta must lie in (0, 1)");
  std::vector<std::string> warnings;
  if (cfg.agent.kind == AgentKind::moucb) {
    if (!(cfg.agent.delta > 0.0) || cfg.agent.delta > 1.0 / 3.0) throw ConfigError("MOUCB requires 0 < delta <= 1/3");
    if (cfg.horizon < 2 * cfg.agent.budget_bound * k) {
      warnings.push_back("horizon is shorter than the 2AK warm-up; the MOUCB regret bound does not apply");
    }
  }
  if (cfg.attacker.kind != AttackerKind::none && cfg.attacker.target == cfg.instance.worst_arm()) {
    warnings.push_back("target arm is the worst arm; logarithmic-cost attacks are not expected to succeed");
  }
  return warnings;
}

struct Checkpoint {
  std::uint64_t round = 0;
  std::uint64_t cost = 0;
  double regret = 0.0;
  std::uint64_t target_pulls = 0;
  std::uint64_t optimal_pulls = 0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Omniscient record of one trial: the K x K matrix of (chosen, pulled) counts
// and the metrics derived from it.
class TrialTrace {
 public:
  TrialTrace(const BanditInstance& instance, Arm target)
      : arm_count_(instance.arm_count()),
        target_(target),
        best_(instance.best_arm()),
        cross_(arm_count_ * arm_count_, 0),
        regret_per_pull_(arm_count_) {
    for (Arm j = 0; j < arm_count_; ++j) regret_per_pull_[j] = gap(instance, best_, j);
  }

  void record(Arm chosen, Arm post) {
    ++cross_[chosen * arm_count_ + post];
    ++rounds_;
    if (chosen != post) ++cost_;
    if (chosen == target_) ++target_pulls_;
    if (chosen == best_) ++optimal_pulls_;
  }

  void add_checkpoint() {
    checkpoints_.push_back(Checkpoint{rounds_, cost_, realized_pseudo_regret(), target_pulls_, optimal_pulls_});
  }

  std::size_t arm_count() const noexcept { return arm_count_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  std::uint64_t cost() const noexcept { return cost_; }
  std::uint64_t target_pulls() const noexcept { return target_pulls_; }
  std::uint64_t optimal_pulls() const noexcept { return optimal_pulls_; }
  const std::vector<Checkpoint>& checkpoints() const noexcept { return checkpoints_; }

  std::uint64_t cross(Arm chosen, Arm post) const { return cross_.at(chosen * arm_count_ + post); }

  std::uint64_t chosen_count(Arm i) const {
    std::uint64_t n = 0;
    for (Arm j = 0; j < arm_count_; ++j) n += cross(i, j);
    return n;
  }

  std::uint64_t pulled_count(Arm j) const {
    std::uint64_t n = 0;
    for (Arm i = 0; i < arm_count_; ++i) n += cross(i, j);
    return n;
  }

  // sum_j N0_j * (mu_best - mu_j): the expected regret given the pulled arms.
  double realized_pseudo_regret() const {
    double r = 0.0;
    for (Arm j = 0; j < arm_count_; ++j) r += static_cast<double>(pulled_count(j)) * regret_per_pull_[j];
    return r;
  }

  friend bool operator==(const TrialTrace&, const TrialTrace&) = default;

 private:
  std::size_t arm_count_;
  Arm target_;
  Arm best_;
  std::vector<std::uint64_t> cross_;
  std::vector<double> regret_per_pull_;
  std::uint64_t rounds_ = 0;
  std::uint64_t cost_ = 0;
  std::uint64_t target_pulls_ = 0;
  std::uint64_t optimal_pulls_ = 0;
  std::vector<Checkpoint> checkpoints_;
};

struct StepRecord {
  std::uint64_t round = 0;
  Arm chosen = 0;
  Arm post = 0;
  double reward = 0.0;
};

// One round of the protocol. The agent learns (chosen, reward); the attacker
// learns (chosen, post, reward).
template <class Agent, class Attacker>
StepRecord step(Agent& agent, Attacker& attacker, const BanditInstance& instance, RngStream& rng, TrialTrace& trace) {
  StepRecord rec;
  rec.round = trace.rounds() + 1;
  rec.chosen = select(agent);
  rec.post = attack(attacker, rec.chosen);
  rec.reward = sample_reward(instance, rec.post, rng);
  agent_update(agent, rec.chosen, rec.reward);
  attacker_update(attacker, rec.chosen, rec.post, rec.reward);
  trace.record(rec.chosen, rec.post);
  return rec;
}

using AnyAgent = std::variant<UcbAgentState, MoucbAgentState>;
using AnyAttacker = std::variant<NullAttacker, OracleAttacker, LcbAttacker>;

inline AnyAgent make_agent(const ExperimentConfig& cfg) {
  const std::size_t k = cfg.instance.arm_count();
  const double sigma = cfg.instance.sigma();
  switch (cfg.agent.kind) {
    case AgentKind::ucb:
      return UcbAgentState(k, UcbParams{sigma});
    case AgentKind::moucb:
      return MoucbAgentState(k, MoucbParams{sigma, cfg.agent.delta, cfg.agent.budget_bound});
  }
  throw ConfigError("unknown agent kind");
}

inline AnyAttacker make_attacker(const ExperimentConfig& cfg) {
  const AttackerParams p{cfg.attacker.target, cfg.instance.sigma(), cfg.attacker.delta, cfg.attacker.cost_cap};
  switch (cfg.attacker.kind) {
    case AttackerKind::none:
      return NullAttacker(cfg.instance.arm_count(), p);
    case AttackerKind::oracle:
      return OracleAttacker(cfg.instance, p);
    case AttackerKind::lcb:
      return LcbAttacker(cfg.instance.arm_count(), p);
  }
  throw ConfigError("unknown attacker kind");
}

struct NullObserver {};

// Runs `cfg.horizon` rounds with RngStream(master_seed, trial_id).
//
// The observer may provide any of
//   on_step(const StepRecord&, const Agent&, const Attacker&, const TrialTrace&)
//   on_checkpoint(const Checkpoint&, const Agent&, const Attacker&, const TrialTrace&)
template <class Observer>
TrialTrace run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id, Observer& observer) {
  validate(cfg);
  const auto schedule = checkpoint_schedule(cfg);
  AnyAgent any_agent = make_agent(cfg);
  AnyAttacker any_attacker = make_attacker(cfg);
  RngStream rng(cfg.master_seed, trial_id);
  TrialTrace trace(cfg.instance, cfg.attacker.target);

  std::visit(
      [&](auto& agent, auto& attacker) {
        auto next = schedule.begin();
        for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
          const StepRecord rec = step(agent, attacker, cfg.instance, rng, trace);
          if constexpr (requires { observer.on_step(rec, agent, attacker, trace); }) {
            observer.on_step(rec, agent, attacker, trace);
          }
          if (next != schedule.end() && *next == t) {
            trace.add_checkpoint();
            if constexpr (requires { observer.on_checkpoint(trace.checkpoints().back(), agent, attacker, trace); }) {
              observer.on_checkpoint(trace.checkpoints().back(), agent, attacker, trace);
            }
            ++next;
          }
        }
      },
      any_agent, any_attacker);
  return trace;
}

inline TrialTrace run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id) {
  NullObserver none;
  return run_trial(cfg, trial_id, none);
}

// Calls fn(i) for i in [0, count) on up to `threads` workers. Exceptions are
// rethrown on the caller's thread (the first one wins).
inline void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 1024))));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

enum class Metric { cost, regret, target_pulls, optimal_pulls };

inline constexpr Metric kMetrics[] = {Metric::cost, Metric::regret, Metric::target_pulls, Metric::optimal_pulls};

inline const char* metric_name(Metric m) {
  switch (m) {
    case Metric::cost:
      return "cost";
    case Metric::regret:
      return "regret";
    case Metric::target_pulls:
      return "target_pulls";
    case Metric::optimal_pulls:
      return "optimal_pulls";
  }
  return "?";
}

inline double metric_value(const Checkpoint& c, Metric m) {
  switch (m) {
    case Metric::cost:
      return static_cast<double>(c.cost);
    case Metric::regret:
      return c.regret;
    case Metric::target_pulls:
      return static_cast<double>(c.target_pulls);
    case Metric::optimal_pulls:
      return static_cast<double>(c.optimal_pulls);
  }
  return 0.0;
}

struct AggregateRow {
  std::uint64_t round = 0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t trials = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

// Per checkpoint and metric: mean and sample standard deviation across
// traces, taken in trace order. Checkpoint-major, metric-minor.
inline std::vector<AggregateRow> aggregate(const std::vector<TrialTrace>& traces) {
  std::vector<AggregateRow> rows;
  if (traces.empty()) return rows;
  const std::size_t n_checkpoints = traces.front().checkpoints().size();
  for (const auto& t : traces) {
    detail::require(t.checkpoints().size() == n_checkpoints, "traces disagree on the checkpoint schedule");
  }
  const double n = static_cast<double>(traces.size());
  for (std::size_t c = 0; c < n_checkpoints; ++c) {
    for (Metric m : kMetrics) {
      double sum = 0.0;
      for (const auto& t : traces) sum += metric_value(t.checkpoints()[c], m);
      const double mean = sum / n;
      double ss = 0.0;
      for (const auto& t : traces) {
        const double d = metric_value(t.checkpoints()[c], m) - mean;
        ss += d * d;
      }
      const double sd = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      rows.push_back(AggregateRow{traces.front().checkpoints()[c].round, metric_name(m), mean, sd, traces.size()});
    }
  }
  return rows;
}

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialTrace> traces;
  std::vector<AggregateRow> rows;

  const AggregateRow* find(std::uint64_t round, std::string_view metric) const {
    for (const auto& r : rows) {
      if (r.round == round && r.metric == metric) return &r;
    }
    return nullptr;
  }

  // Mean of `metric` at `round`; throws if the round is not a checkpoint.
  double mean_at(std::uint64_t round, std::string_view metric) const {
    const auto* r = find(round, metric);
    if (r == nullptr) throw ContractViolation("no checkpoint at round " + std::to_string(round));
    return r->mean;
  }
};

// Runs every trial (trial i uses stream i) and aggregates. The result does
// not depend on `threads`.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  validate(cfg);
  std::vector<std::optional<TrialTrace>> slots(cfg.trials);
  parallel_for(cfg.trials, threads, [&](std::uint64_t i) { slots[i] = run_trial(cfg, i); });
  ExperimentResult result{cfg, {}, {}};
  result.traces.reserve(cfg.trials);
  for (auto& s : slots) result.traces.push_back(std::move(*s));
  result.rows = aggregate(result.traces);
  return result;
}

}  // namespace bandit_lab
