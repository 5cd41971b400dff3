#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "coverage.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "format.hpp"
#include "output.hpp"
#include "presets.hpp"

// Command-line front end: `run`, `bounds`, `coverage` and `presets`.
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

namespace bandit_lab {

struct CliOptions {
  std::string preset;
  std::string config_path;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  unsigned threads = 0;
  bool plot = false;
  bool debug_log = false;
};

// --threads, then BANDIT_LAB_THREADS, then the hardware concurrency.
inline unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("BANDIT_LAB_THREADS")) {
    std::uint64_t n = 0;
    if (parse_uint(env, n) && n > 0) return static_cast<unsigned>(n);
  }
  return default_thread_count();
}

namespace detail {

struct ExperimentSet {
  std::string label;  // output prefix for plots
  std::vector<ExperimentConfig> configs;
};

inline ExperimentSet resolve_configs(const CliOptions& opt) {
  if (opt.preset.empty() == opt.config_path.empty()) {
    throw ConfigError("give exactly one of PRESET or --config FILE");
  }
  ExperimentSet set;
  if (!opt.config_path.empty()) {
    auto cfg = load_config(opt.config_path);
    if (opt.horizon) cfg.horizon = *opt.horizon;
    if (opt.trials) cfg.trials = *opt.trials;
    if (opt.seed) cfg.master_seed = *opt.seed;
    validate(cfg);
    set.label = cfg.name;
    set.configs.push_back(std::move(cfg));
  } else {
    const Preset p = parse_preset(opt.preset);
    const auto full = preset_name(p);
    set.label = std::string(full.substr(0, full.find('_')));
    set.configs = expand_preset(p, PresetOverrides{opt.horizon, opt.trials, opt.seed});
  }
  return set;
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

inline void add_common_flags(CLI::App& cmd, CliOptions& opt, bool with_preset = true) {
  if (with_preset) cmd.add_option("preset", opt.preset, "Preset name (fig2 .. fig8, probe)");
  cmd.add_option("--config", opt.config_path, "Experiment config file");
  cmd.add_option("--horizon", opt.horizon, "Rounds per trial");
  cmd.add_option("--seed", opt.seed, "Master seed");
  cmd.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  cmd.add_option("--threads", opt.threads, "Worker threads (default: BANDIT_LAB_THREADS or all cores)");
}

inline int cmd_run(const CliOptions& opt, std::ostream& out) {
  const auto set = resolve_configs(opt);
  const auto dir = prepare_out_dir(opt.out_dir);
  const unsigned threads = resolve_threads(opt.threads);
  std::vector<ExperimentResult> results;
  for (const auto& cfg : set.configs) {
    for (const auto& w : validate(cfg)) out << "warning: " << cfg.name << ": " << w << '\n';
    auto res = run_experiment(cfg, threads);
    const auto path = dir / (cfg.name + ".csv");
    write_csv_file(path.string(), res.rows);
    if (opt.debug_log) {
      const auto log_path = dir / (cfg.name + "_trial0_rounds.csv");
      std::ofstream log(log_path, std::ios::binary);
      RoundLogObserver obs(log);
      run_trial(cfg, 0, obs);
    }
    const double t = static_cast<double>(cfg.horizon);
    out << cfg.name << ": T=" << cfg.horizon << " trials=" << cfg.trials
        << " cost=" << format_double(res.mean_at(cfg.horizon, "cost"))
        << " regret=" << format_double(res.mean_at(cfg.horizon, "regret"))
        << " target_frac=" << format_double(res.mean_at(cfg.horizon, "target_pulls") / t)
        << " optimal_frac=" << format_double(res.mean_at(cfg.horizon, "optimal_pulls") / t) << " -> " << path.string()
        << '\n';
    results.push_back(std::move(res));
  }
  if (opt.plot) {
    for (Metric m : kMetrics) {
      std::vector<PlotSeries> series;
      for (const auto& r : results) series.push_back({r.config.name, rows_for_metric(r.rows, metric_name(m))});
      const auto path = dir / (set.label + "_" + metric_name(m) + ".svg");
      std::ofstream svg(path, std::ios::binary);
      svg << render_svg(set.label + ": " + metric_name(m), metric_name(m), series);
    }
  }
  return 0;
}

inline int cmd_bounds(const CliOptions& opt, std::ostream& out) {
  const auto set = resolve_configs(opt);
  const auto dir = prepare_out_dir(opt.out_dir);
  for (const auto& cfg : set.configs) {
    const auto rows = bound_rows(cfg);
    const auto path = dir / (cfg.name + "_bounds.csv");
    write_csv_file(path.string(), rows);
    out << cfg.name << ": T=" << cfg.horizon;
    for (const auto& r : rows) {
      if (r.round == cfg.horizon) out << ' ' << r.metric << '=' << format_double(r.mean);
    }
    if (rows.empty()) out << " (no bound applies)";
    out << " -> " << path.string() << '\n';
  }
  return 0;
}

inline int cmd_coverage(const CliOptions& opt, std::ostream& out) {
  auto tweaked = opt;
  tweaked.trials = std::nullopt;
  const auto set = resolve_configs(tweaked);
  const auto dir = prepare_out_dir(opt.out_dir);
  const unsigned threads = resolve_threads(opt.threads);
  const std::uint64_t m = opt.trials.value_or(1000);
  if (m < 100) throw ConfigError("coverage needs --trials >= 100");
  for (const auto& cfg : set.configs) {
    const auto rep = event_coverage_check(cfg, m, threads);
    const auto path = dir / (cfg.name + "_coverage.csv");
    write_csv_file(path.string(), coverage_rows(rep, cfg.horizon));
    out << cfg.name << ": M=" << m << " e1_violation_rate=" << format_double(rep.e1_violation_rate)
        << " e2_violation_rate=" << format_double(rep.e2_violation_rate)
        << " lemma3_violation_rate=" << format_double(rep.lemma3_violation_rate) << " -> " << path.string() << '\n';
  }
  return 0;
}

inline int cmd_presets(const std::string& show, std::ostream& out) {
  if (show.empty()) {
    for (Preset p : kAllPresets) out << preset_name(p) << '\n';
    return 0;
  }
  for (const auto& cfg : expand_preset(parse_preset(show))) out << write_config(cfg) << '\n';
  return 0;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Action-manipulation attack and defense laboratory for stochastic bandits", "bandit_lab"};
  app.require_subcommand(1);

  CliOptions run_opt, bounds_opt, cov_opt;
  std::string show;

  auto* run = app.add_subcommand("run", "Run a preset or a config file and write aggregated CSV");
  detail::add_common_flags(*run, run_opt);
  run->add_option("--trials", run_opt.trials, "Trials per experiment");
  run->add_flag("--plot", run_opt.plot, "Also write SVG charts");
  run->add_flag("--debug-log", run_opt.debug_log, "Write the per-round log of trial 0");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form cost and regret bounds");
  detail::add_common_flags(*bounds, bounds_opt);

  auto* coverage = app.add_subcommand("coverage", "Estimate confidence-event violation rates");
  detail::add_common_flags(*coverage, cov_opt);
  coverage->add_option("--trials", cov_opt.trials, "Monte Carlo trials M (default 1000)");

  auto* list = app.add_subcommand("presets", "List presets, or print one preset's configs");
  list->add_option("name", show, "Preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return detail::cmd_run(run_opt, out);
    if (*bounds) return detail::cmd_bounds(bounds_opt, out);
    if (*coverage) return detail::cmd_coverage(cov_opt, out);
    if (*list) return detail::cmd_presets(show, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace bandit_lab
