#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "coverage.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "format.hpp"

// CSV and SVG emitters. CSV schema: round,metric,mean,std,trials with rows in
// checkpoint-major, metric-minor order.

namespace bandit_lab {

inline constexpr const char* kCsvHeader = "round,metric,mean,std,trials";

inline void write_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.round << ',' << r.metric << ',' << format_double(r.mean) << ',' << format_double(r.std) << ','
        << r.trials << '\n';
  }
}

inline void write_csv_file(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, rows);
}

// Closed-form bound curves over the config's checkpoint schedule. Rounds where
// a bound's preconditions fail are skipped.
inline std::vector<AggregateRow> bound_rows(const ExperimentConfig& cfg) {
  std::vector<AggregateRow> rows;
  const auto& inst = cfg.instance;
  const bool cost_bound_defined = [&] {
    if (!(gap(inst, cfg.attacker.target, inst.worst_arm()) > 0.0)) return false;
    for (Arm j = 0; j < inst.arm_count(); ++j) {
      if (j != inst.worst_arm() && !(gap(inst, j, inst.worst_arm()) > 0.0)) return false;
    }
    return true;
  }();
  const double min_t = theorem1_min_horizon(inst.arm_count(), cfg.attacker.delta);
  const std::uint64_t a = cfg.agent.budget_bound;
  const bool regret_bound_defined = a >= 1 && cfg.agent.delta > 0.0 && cfg.agent.delta <= 1.0 / 3.0;
  for (std::uint64_t t : checkpoint_schedule(cfg)) {
    const double horizon = static_cast<double>(t);
    if (cost_bound_defined && horizon >= min_t) {
      const auto in = BoundInputs::from_instance(inst, cfg.attacker.target, cfg.attacker.delta, horizon);
      rows.push_back(AggregateRow{t, "bound_cost_thm1", theorem1_cost_bound(in), 0.0, 0});
    }
    if (regret_bound_defined && t >= 2 * a * inst.arm_count()) {
      const auto in = BoundInputs::from_instance(inst, cfg.attacker.target, cfg.agent.delta, horizon,
                                                 static_cast<double>(a));
      rows.push_back(AggregateRow{t, "bound_regret_thm3", theorem3_regret_bound(in), 0.0, 0});
    }
  }
  return rows;
}

inline std::vector<AggregateRow> coverage_rows(const CoverageReport& rep, std::uint64_t horizon) {
  return {
      AggregateRow{horizon, "e1_violation_rate", rep.e1_violation_rate, 0.0, rep.trials},
      AggregateRow{horizon, "e2_violation_rate", rep.e2_violation_rate, 0.0, rep.trials},
      AggregateRow{horizon, "lemma3_violation_rate", rep.lemma3_violation_rate, 0.0, rep.e2_holding_trials},
  };
}

// Per-round debug records "t,chosen,post,reward" with 1-based arm labels.
class RoundLogObserver {
 public:
  explicit RoundLogObserver(std::ostream& out) : out_(out) { out_ << "t,chosen,post,reward\n"; }

  template <class Agent, class Attacker>
  void on_step(const StepRecord& rec, const Agent&, const Attacker&, const TrialTrace&) {
    out_ << rec.round << ',' << rec.chosen + 1 << ',' << rec.post + 1 << ',' << format_double(rec.reward) << '\n';
  }

 private:
  std::ostream& out_;
};

struct PlotSeries {
  std::string label;
  std::vector<AggregateRow> rows;  // one metric only
};

// Line chart of mean +- std against log10(round). Static SVG, no dependencies.
inline std::string render_svg(const std::string& title, const std::string& metric,
                              const std::vector<PlotSeries>& series) {
  constexpr double width = 720, height = 440, left = 80, right = 200, top = 40, bottom = 50;
  static const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
  for (const auto& s : series) {
    for (const auto& r : s.rows) {
      const double x = std::log10(static_cast<double>(std::max<std::uint64_t>(r.round, 1)));
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, r.mean - r.std);
      y_max = std::max(y_max, r.mean + r.std);
    }
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return top + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x_min)); d <= static_cast<int>(std::floor(x_max)); ++d) {
    svg << "<text x=\"" << px(d) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y_min + (y_max - y_min) * i / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << format_double(std::round(y * 100) / 100)
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">round</text>\n";
  svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
      << ")\" text-anchor=\"middle\">" << metric << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % std::size(colors)];
    if (s.rows.empty()) continue;
    std::ostringstream band, line;
    for (const auto& r : s.rows) {
      band << px(std::log10(static_cast<double>(r.round))) << ',' << py(r.mean + r.std) << ' ';
    }
    for (auto it = s.rows.rbegin(); it != s.rows.rend(); ++it) {
      band << px(std::log10(static_cast<double>(it->round))) << ',' << py(it->mean - it->std) << ' ';
    }
    for (const auto& r : s.rows) line << px(std::log10(static_cast<double>(r.round))) << ',' << py(r.mean) << ' ';
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(si);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline std::vector<AggregateRow> rows_for_metric(const std::vector<AggregateRow>& rows, std::string_view metric) {
  std::vector<AggregateRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [&](const auto& r) { return r.metric == metric; });
  return out;
}

}  // namespace bandit_lab
