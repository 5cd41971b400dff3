#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "format.hpp"

// Experiment config files: flat `key = value` lines, `#` starts a comment,
// lists are comma-separated. Arm labels are 1-based.
//
//   name           experiment name, used for output file names
//   k              number of arms (optional, must match `means`)
//   means          arm means, comma-separated              (required)
//   sigma          reward standard deviation              (required)
//   distribution   gaussian
//   agent          ucb | moucb
//   delta          confidence parameter for agent and attacker
//   agent_delta    overrides delta for the agent
//   attacker_delta overrides delta for the attacker
//   budget_bound   MOUCB's attack-cost bound A
//   attacker       none | oracle | lcb
//   target         target arm label, default K
//   cost_cap       stop attacking after this many attacks, or `none`
//   horizon        rounds per trial
//   trials         number of trials
//   seed           master seed
//   checkpoints    explicit checkpoint rounds (default: geometric schedule)

namespace bandit_lab {

namespace detail {

struct ConfigEntry {
  std::string value;
  std::size_t line;
};

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  static const char* const known[] = {"name",          "k",           "means",   "sigma",   "distribution",
                                      "agent",         "delta",       "agent_delta", "attacker_delta",
                                      "budget_bound",  "attacker",    "target",  "cost_cap", "horizon",
                                      "trials",        "seed",        "checkpoints"};
  std::map<std::string, detail::ConfigEntry, std::less<>> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    if (!entries.emplace(key, detail::ConfigEntry{value, line_no}).second) {
      throw ConfigError("duplicate key '" + key + "'", line_no);
    }
  }

  auto get = [&](std::string_view key) -> const detail::ConfigEntry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto need = [&](std::string_view key) -> const detail::ConfigEntry& {
    const auto* e = get(key);
    if (e == nullptr) throw ConfigError("missing required key '" + std::string(key) + "'", line_no + 1);
    return *e;
  };
  auto as_double = [](const detail::ConfigEntry& e, std::string_view key) {
    double v = 0.0;
    if (!parse_double(e.value, v)) throw ConfigError("'" + std::string(key) + "' is not a number", e.line);
    return v;
  };
  auto as_uint = [](const detail::ConfigEntry& e, std::string_view key) {
    std::uint64_t v = 0;
    if (!parse_uint(e.value, v)) {
      throw ConfigError("'" + std::string(key) + "' is not a non-negative integer", e.line);
    }
    return v;
  };

  const auto& means_entry = need("means");
  std::vector<double> means;
  for (auto item : detail::split_list(means_entry.value)) {
    double v = 0.0;
    if (!parse_double(item, v)) throw ConfigError("bad arm mean '" + std::string(item) + "'", means_entry.line);
    means.push_back(v);
  }
  if (const auto* e = get("k"); e != nullptr && as_uint(*e, "k") != means.size()) {
    throw ConfigError("k does not match the number of means", e->line);
  }
  const auto& sigma_entry = need("sigma");
  const double sigma = as_double(sigma_entry, "sigma");
  RewardDistribution dist = RewardDistribution::gaussian;
  if (const auto* e = get("distribution")) {
    try {
      dist = parse_distribution(e->value);
    } catch (const ConfigError& err) {
      throw ConfigError(err.what(), e->line);
    }
  }

  std::optional<BanditInstance> instance;
  try {
    instance.emplace(means, sigma, dist);
  } catch (const ConfigError& err) {
    throw ConfigError(err.what(), means.size() < 2 ? means_entry.line : sigma_entry.line);
  }

  ExperimentConfig cfg{.instance = *instance};
  if (const auto* e = get("name")) cfg.name = e->value;

  double delta = 0.05;
  if (const auto* e = get("delta")) delta = as_double(*e, "delta");
  cfg.agent.delta = delta;
  cfg.attacker.delta = delta;
  if (const auto* e = get("agent_delta")) cfg.agent.delta = as_double(*e, "agent_delta");
  if (const auto* e = get("attacker_delta")) cfg.attacker.delta = as_double(*e, "attacker_delta");

  if (const auto* e = get("agent")) {
    if (e->value == "ucb") {
      cfg.agent.kind = AgentKind::ucb;
    } else if (e->value == "moucb") {
      cfg.agent.kind = AgentKind::moucb;
    } else {
      throw ConfigError("unknown agent '" + e->value + "' (expected ucb or moucb)", e->line);
    }
  }
  if (const auto* e = get("budget_bound")) cfg.agent.budget_bound = as_uint(*e, "budget_bound");

  if (const auto* e = get("attacker")) {
    if (e->value == "none" || e->value == "null") {
      cfg.attacker.kind = AttackerKind::none;
    } else if (e->value == "oracle") {
      cfg.attacker.kind = AttackerKind::oracle;
    } else if (e->value == "lcb") {
      cfg.attacker.kind = AttackerKind::lcb;
    } else {
      throw ConfigError("unknown attacker '" + e->value + "' (expected none, oracle or lcb)", e->line);
    }
  }
  cfg.attacker.target = means.size() - 1;
  if (const auto* e = get("target")) {
    const auto label = as_uint(*e, "target");
    if (label < 1 || label > means.size()) throw ConfigError("target must be an arm label in 1..K", e->line);
    cfg.attacker.target = label - 1;
  }
  if (const auto* e = get("cost_cap"); e != nullptr && e->value != "none") {
    cfg.attacker.cost_cap = as_uint(*e, "cost_cap");
  }

  if (const auto* e = get("horizon")) cfg.horizon = as_uint(*e, "horizon");
  if (const auto* e = get("trials")) cfg.trials = as_uint(*e, "trials");
  if (const auto* e = get("seed")) cfg.master_seed = as_uint(*e, "seed");
  if (const auto* e = get("checkpoints")) {
    for (auto item : detail::split_list(e->value)) {
      std::uint64_t r = 0;
      if (!parse_uint(item, r)) throw ConfigError("bad checkpoint '" + std::string(item) + "'", e->line);
      cfg.checkpoints.push_back(r);
    }
  }

  auto line_of = [&](std::string_view key, std::string_view fallback = {}) -> std::size_t {
    if (const auto* e = get(key)) return e->line;
    if (const auto* e = get(fallback)) return e->line;
    return 0;
  };
  if (cfg.horizon < means.size()) throw ConfigError("horizon must be at least the number of arms", line_of("horizon"));
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1", line_of("trials"));
  if (!(cfg.attacker.delta > 0.0 && cfg.attacker.delta < 1.0)) {
    throw ConfigError("attacker delta must lie in (0, 1)", line_of("attacker_delta", "delta"));
  }
  if (cfg.agent.kind == AgentKind::moucb && (!(cfg.agent.delta > 0.0) || cfg.agent.delta > 1.0 / 3.0)) {
    throw ConfigError("MOUCB requires 0 < delta <= 1/3", line_of("agent_delta", "delta"));
  }
  validate(cfg);
  return cfg;
}

inline ExperimentConfig parse_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::string write_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const auto& inst = cfg.instance;
  out << "name = " << cfg.name << '\n';
  out << "k = " << inst.arm_count() << '\n';
  out << "means = ";
  for (std::size_t i = 0; i < inst.arm_count(); ++i) out << (i ? ", " : "") << format_double(inst.means()[i]);
  out << '\n';
  out << "sigma = " << format_double(inst.sigma()) << '\n';
  out << "distribution = " << to_string(inst.distribution()) << '\n';
  out << "agent = " << to_string(cfg.agent.kind) << '\n';
  out << "agent_delta = " << format_double(cfg.agent.delta) << '\n';
  out << "budget_bound = " << cfg.agent.budget_bound << '\n';
  out << "attacker = " << to_string(cfg.attacker.kind) << '\n';
  out << "attacker_delta = " << format_double(cfg.attacker.delta) << '\n';
  out << "target = " << cfg.attacker.target + 1 << '\n';
  out << "cost_cap = " << (cfg.attacker.cost_cap ? std::to_string(*cfg.attacker.cost_cap) : "none") << '\n';
  out << "horizon = " << cfg.horizon << '\n';
  out << "trials = " << cfg.trials << '\n';
  out << "seed = " << cfg.master_seed << '\n';
  if (!cfg.checkpoints.empty()) {
    out << "checkpoints = ";
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) out << (i ? ", " : "") << cfg.checkpoints[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace bandit_lab
