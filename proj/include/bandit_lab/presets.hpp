#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "format.hpp"

// Experiment presets for the attack and defense figures. Every preset uses
// K = 10, delta = 0.05, 20 trials, target arm 10 and a desk-scale horizon of
// 1e5 unless overridden.

namespace bandit_lab {

enum class Preset {
  fig2_target_pulls,
  fig3_cost_vs_sigma,
  fig4_cost_vs_gapsum,
  fig5_moucb_optimal_pulls,
  fig6_ucb_optimal_pulls,
  fig7_moucb_regret,
  fig8_ucb_regret,
  probe_worst_target,
};

inline constexpr Preset kAllPresets[] = {
    Preset::fig2_target_pulls,        Preset::fig3_cost_vs_sigma,     Preset::fig4_cost_vs_gapsum,
    Preset::fig5_moucb_optimal_pulls, Preset::fig6_ucb_optimal_pulls, Preset::fig7_moucb_regret,
    Preset::fig8_ucb_regret,          Preset::probe_worst_target,
};

inline std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::fig2_target_pulls:
      return "fig2_target_pulls";
    case Preset::fig3_cost_vs_sigma:
      return "fig3_cost_vs_sigma";
    case Preset::fig4_cost_vs_gapsum:
      return "fig4_cost_vs_gapsum";
    case Preset::fig5_moucb_optimal_pulls:
      return "fig5_moucb_optimal_pulls";
    case Preset::fig6_ucb_optimal_pulls:
      return "fig6_ucb_optimal_pulls";
    case Preset::fig7_moucb_regret:
      return "fig7_moucb_regret";
    case Preset::fig8_ucb_regret:
      return "fig8_ucb_regret";
    case Preset::probe_worst_target:
      return "probe_worst_target";
  }
  return "?";
}

// Accepts the full name or its short prefix ("fig2", "probe").
inline std::optional<Preset> find_preset(std::string_view name) {
  for (Preset p : kAllPresets) {
    const auto full = preset_name(p);
    if (name == full) return p;
    const auto underscore = full.find('_');
    if (name == full.substr(0, underscore)) return p;
  }
  return std::nullopt;
}

inline Preset parse_preset(std::string_view name) {
  if (auto p = find_preset(name)) return *p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

struct PresetOverrides {
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
};

namespace presets {

inline constexpr double kDelta = 0.05;
inline constexpr std::uint64_t kTrials = 20;
inline constexpr std::uint64_t kHorizon = 100000;
inline constexpr std::uint64_t kSeed = 1;
inline constexpr std::uint64_t kCostCap = 2000;
inline constexpr std::uint64_t kBudgetBound = 3000;

// Target arm 10 (mean 0.2) sits just above the worst arm 9 (mean 0.1).
inline std::vector<double> attack_means() { return {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.1, 0.2}; }

// Best arm 1, worst arm 7, target arm 10 (mean 0.6).
inline std::vector<double> defense_means() { return {1.0, 0.8, 0.9, 0.5, 0.2, 0.3, 0.1, 0.4, 0.7, 0.6}; }

// Attack instance with the target's gap to the worst arm set to `target_gap`;
// every other arm keeps its mean.
inline std::vector<double> attack_means_with_target_gap(double target_gap) {
  auto m = attack_means();
  m[9] = m[8] + target_gap;
  return m;
}

}  // namespace presets

inline std::vector<ExperimentConfig> expand_preset(Preset preset, const PresetOverrides& ov = {}) {
  const std::uint64_t horizon = ov.horizon.value_or(presets::kHorizon);
  const std::uint64_t trials = ov.trials.value_or(presets::kTrials);
  const std::uint64_t seed = ov.seed.value_or(presets::kSeed);
  const std::string prefix(preset_name(preset).substr(0, preset_name(preset).find('_')));

  auto make = [&](std::string name, std::vector<double> means, double sigma, AgentKind agent, AttackerKind attacker,
                  Arm target, std::optional<std::uint64_t> cap, std::uint64_t budget) {
    return ExperimentConfig{
        .name = prefix + "_" + name,
        .instance = BanditInstance(std::move(means), sigma),
        .agent = AgentConfig{agent, presets::kDelta, budget},
        .attacker = AttackerConfig{attacker, target, presets::kDelta, cap},
        .horizon = horizon,
        .trials = trials,
        .master_seed = seed,
        .checkpoints = {},
    };
  };
  auto defense = [&](AgentKind agent, AttackerKind attacker) {
    return make(std::string(to_string(agent)) + "_" + std::string(to_string(attacker)),
                presets::defense_means(), 0.1, agent, attacker, 9, presets::kCostCap, presets::kBudgetBound);
  };

  std::vector<ExperimentConfig> out;
  switch (preset) {
    case Preset::fig2_target_pulls:
      out.push_back(make("ucb_lcb", presets::attack_means(), 0.1, AgentKind::ucb, AttackerKind::lcb, 9, {}, 0));
      out.push_back(make("ucb_none", presets::attack_means(), 0.1, AgentKind::ucb, AttackerKind::none, 9, {}, 0));
      break;
    case Preset::fig3_cost_vs_sigma:
      for (double sigma : {0.1, 0.3, 0.5}) {
        out.push_back(make("sigma" + format_double(sigma), presets::attack_means(), sigma, AgentKind::ucb,
                           AttackerKind::lcb, 9, {}, 0));
      }
      break;
    case Preset::fig4_cost_vs_gapsum:
      // sigma / Delta_{K,worst} = 1 throughout.
      for (double g : {0.2, 0.6, 0.9}) {
        out.push_back(make("gap" + format_double(g), presets::attack_means_with_target_gap(g), g, AgentKind::ucb,
                           AttackerKind::lcb, 9, {}, 0));
      }
      break;
    case Preset::fig5_moucb_optimal_pulls:
    case Preset::fig7_moucb_regret:
      out.push_back(defense(AgentKind::moucb, AttackerKind::lcb));
      out.push_back(defense(AgentKind::moucb, AttackerKind::oracle));
      out.push_back(defense(AgentKind::moucb, AttackerKind::none));
      if (preset == Preset::fig5_moucb_optimal_pulls) out.push_back(defense(AgentKind::ucb, AttackerKind::none));
      break;
    case Preset::fig6_ucb_optimal_pulls:
    case Preset::fig8_ucb_regret:
      out.push_back(defense(AgentKind::ucb, AttackerKind::lcb));
      out.push_back(defense(AgentKind::ucb, AttackerKind::oracle));
      out.push_back(defense(AgentKind::ucb, AttackerKind::none));
      break;
    case Preset::probe_worst_target:
      out.push_back(make("ucb_lcb_worst", presets::attack_means(), 0.1, AgentKind::ucb, AttackerKind::lcb, 8, {}, 0));
      break;
  }
  return out;
}

}  // namespace bandit_lab
