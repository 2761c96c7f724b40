// Copyright 2026 The hteb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/report/aggregate.hpp"
#include "hteb/report/inference.hpp"

namespace hteb::report {

using json = nlohmann::json;

inline double round2(double x) {
  const double r = std::round(x * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

inline double round3(double x) {
  const double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

inline std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(x));
  return buf;
}

/// "+1.25" or "−1.25" (U+2212 minus).
inline std::string signed2(double x) {
  const double r = round2(x);
  return (r < 0.0 ? "−" : "+") + fixed2(std::fabs(r));
}

struct ReportOptions {
  std::vector<TransformationId> transformations{kAllTransformations.begin(), kAllTransformations.end()};
  std::size_t min_datasets = kDefaultMinDatasets;
  std::size_t n_splits = stats::kDefaultSplits;
  std::uint64_t seed = 1337;
};

struct ReportBundle {
  std::vector<RunAveraged> cells;  // complete cells only
  std::vector<ModelScores> models;
  std::vector<DeltaRow> deltas;
  std::optional<StatReport> stats;
  std::vector<RankingRow> ranking;
  std::vector<std::pair<Axis, std::optional<stats::SplitHalfResult>>> split_half;
  std::vector<std::string> warnings;
  ReportOptions options;
};

/// Runs every aggregation. Analyses that cannot run on the given cells
/// (too few datasets or models) leave a warning instead of failing the
/// report.
inline ReportBundle build_report(const std::vector<ScoreCell>& raw, const ReportOptions& opt = {}) {
  ReportBundle b;
  b.options = opt;
  const auto averaged = average_runs(raw);
  if (averaged.empty()) throw Error(Errc::kEmptyInput, "no valid score cells");
  for (const auto& c : raw) {
    if (!c.ok()) {
      b.warnings.push_back("failed cell " + c.model_id + " / " + c.dataset_id + " / " + condition_name(c.condition) +
                           " / " + std::to_string(c.run_seed) + ": " + c.error);
    }
  }
  const auto table = complete_cells(averaged, opt.transformations, b.warnings);
  if (table.empty()) throw Error(Errc::kMissingCondition, "no model has a complete set of conditions");
  b.cells = table.cells();
  for (const auto& m : table.models()) b.models.push_back(axis_and_total_scores(table, m, opt.transformations));
  b.deltas = transformation_delta_table(table, opt.transformations);
  try {
    b.stats = per_transformation_inference(table, opt.transformations, opt.min_datasets);
  } catch (const Error& e) {
    b.warnings.push_back(std::string("statistics skipped: ") + e.what());
  }
  try {
    b.ranking = ranking_stability(table, opt.transformations);
  } catch (const Error& e) {
    b.warnings.push_back(std::string("ranking stability skipped: ") + e.what());
  }
  for (auto a : axes_of(opt.transformations)) {
    try {
      b.split_half.emplace_back(
          a, stats::split_half_reliability(split_half_input(table, a, opt.transformations), opt.n_splits, opt.seed));
    } catch (const Error& e) {
      b.split_half.emplace_back(a, std::nullopt);
      b.warnings.push_back("split-half " + std::string(name_of(a)) + " skipped: " + e.what());
    }
  }
  return b;
}

/// "<model> <original> → <total> (<delta>)".
inline std::string headline_row(const std::string& model, double original, double total) {
  return model + " " + fixed2(original) + " → " + fixed2(total) + " (" + signed2(total - original) + ")";
}

inline std::string render_headline(const std::vector<ModelScores>& models) {
  std::ostringstream out;
  double sum_o = 0.0, sum_t = 0.0;
  for (const auto& m : models) {
    out << headline_row(m.model_id, m.original, m.total) << '\n';
    sum_o += m.original;
    sum_t += m.total;
  }
  if (models.size() > 1) {
    const auto n = static_cast<double>(models.size());
    out << headline_row("Average", sum_o / n, sum_t / n) << '\n';
  }
  out << '\n' << "model";
  if (!models.empty()) {
    for (const auto& [axis, v] : models.front().axes) out << '\t' << name_of(axis);
  }
  out << '\n';
  for (const auto& m : models) {
    out << m.model_id;
    for (const auto& [axis, v] : m.axes) out << '\t' << fixed2(v) << " (" << signed2(v - m.original) << ")";
    out << '\n';
  }
  return out.str();
}

inline json stats_json(const ReportBundle& b) {
  json j = {{"transformations", json::array()}, {"axes", json::array()}};
  if (!b.stats) return j;
  for (const auto& s : b.stats->transformations) {
    j["transformations"].push_back({{"transformation", name_of(s.transformation)},
                                    {"axis", name_of(axis_of(s.transformation))},
                                    {"hl_shift", round2(s.hl_shift)},
                                    {"ci", {round2(s.ci_low), round2(s.ci_high)}},
                                    {"p_raw", s.p_raw},
                                    {"p_holm", s.p_holm},
                                    {"median_abs_delta", round2(s.median_abs_delta)},
                                    {"n", s.n}});
  }
  for (const auto& a : b.stats->axes) {
    j["axes"].push_back({{"axis", name_of(a.axis)}, {"median_abs_delta", round2(a.median_abs_delta)}, {"n", a.n}});
  }
  return j;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline constexpr double kSignificance = 0.05;

/// Forest plot rendered from the stats.json rows, so both always agree.
/// Rows with Holm p >= .05 are grey.
inline std::string forest_svg(const json& stats) {
  const auto& rows = stats.at("transformations");
  const double row_h = 28.0, top = 40.0, left = 190.0, plot_w = 380.0, right = 150.0;
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r["ci"][0].get<double>());
    hi = std::max(hi, r["ci"][1].get<double>());
  }
  const double pad = std::max(0.5, 0.05 * (hi - lo));
  lo -= pad;
  hi += pad;
  auto x_of = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const double height = top + row_h * static_cast<double>(rows.size()) + 40.0;
  const double width = left + plot_w + right;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"" << num(left) << "\" y=\"20\" font-weight=\"bold\">Hodges-Lehmann shift (pp) with 95% CI</text>\n";
  const double x0 = x_of(0.0);
  s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(top - 10) << "\" x2=\"" << num(x0) << "\" y2=\""
    << num(height - 30) << "\" stroke=\"#444\" stroke-dasharray=\"3,3\"/>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double p = r["p_holm"].get<double>();
    const bool significant = p < kSignificance;
    const std::string colour = significant ? "#1f77b4" : "#9e9e9e";
    const double y = top + row_h * (static_cast<double>(i) + 0.5);
    const double shift = r["hl_shift"].get<double>();
    const double cl = r["ci"][0].get<double>(), ch = r["ci"][1].get<double>();
    s << "<g class=\"row\" data-transformation=\"" << xml_escape(r["transformation"].get<std::string>())
      << "\" data-hl-shift=\"" << r["hl_shift"].dump() << "\" data-ci-low=\"" << r["ci"][0].dump()
      << "\" data-ci-high=\"" << r["ci"][1].dump() << "\" data-p-holm=\"" << r["p_holm"].dump()
      << "\" data-median-abs-delta=\"" << r["median_abs_delta"].dump() << "\" data-significant=\""
      << (significant ? "true" : "false") << "\" fill=\"" << colour << "\" stroke=\"" << colour << "\">\n";
    s << "  <text x=\"10\" y=\"" << num(y + 4) << "\" stroke=\"none\">"
      << xml_escape(r["transformation"].get<std::string>()) << "</text>\n";
    s << "  <line x1=\"" << num(x_of(cl)) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x_of(ch)) << "\" y2=\""
      << num(y) << "\" stroke-width=\"2\"/>\n";
    s << "  <circle cx=\"" << num(x_of(shift)) << "\" cy=\"" << num(y) << "\" r=\"4\"/>\n";
    const std::string p_text = p < 0.001 ? "p < .001" : "p = " + num(p).substr(0, 4) + (p >= 1.0 ? "" : num(p).substr(4));
    s << "  <text x=\"" << num(left + plot_w + 10) << "\" y=\"" << num(y + 4) << "\" stroke=\"none\">"
      << num(shift) << ", " << xml_escape(p_text) << ", |Δ| " << num(r["median_abs_delta"].get<double>())
      << "</text>\n";
    s << "</g>\n";
  }
  s << "<text x=\"" << num(x_of(lo)) << "\" y=\"" << num(height - 12) << "\">" << num(lo) << "</text>\n";
  s << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(height - 12) << "\">0</text>\n";
  s << "<text x=\"" << num(x_of(hi) - 30) << "\" y=\"" << num(height - 12) << "\">" << num(hi) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot open " + path.string());
  out << content;
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
}

/// Writes scores.csv, deltas.csv, stats.json, ranking.json, splithalf.json and
/// forest.svg into `dir`. Identical bundles produce identical bytes.
inline void emit_report(const ReportBundle& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + dir.string());

  std::ostringstream scores;
  scores << "model,original";
  const auto axes = axes_of(b.options.transformations);
  for (auto a : axes) scores << ',' << name_of(a);
  scores << ",total,delta\n";
  for (const auto& m : b.models) {
    scores << m.model_id << ',' << fixed2(m.original);
    for (auto a : axes) scores << ',' << fixed2(m.axes.at(a));
    scores << ',' << fixed2(m.total) << ',' << fixed2(m.delta()) << '\n';
  }
  write_file(dir / "scores.csv", scores.str());

  std::ostringstream deltas;
  deltas << "model,transformation,axis,delta_pp\n";
  for (const auto& d : b.deltas) {
    deltas << d.model_id << ',' << name_of(d.transformation) << ',' << name_of(axis_of(d.transformation)) << ','
           << fixed2(d.delta) << '\n';
  }
  write_file(dir / "deltas.csv", deltas.str());

  const json sj = stats_json(b);
  write_file(dir / "stats.json", sj.dump(2) + "\n");

  json rj = json::array();
  for (const auto& r : b.ranking) {
    rj.push_back({{"target", r.target.name()},
                  {"kind", r.target.kind == RankTarget::Kind::kTransformation ? "transformation"
                           : r.target.kind == RankTarget::Kind::kAxis         ? "axis"
                                                                              : "overall"},
                  {"mean_tau", round3(r.mean_tau)},
                  {"sd_tau", round3(r.sd_tau)},
                  {"n_datasets", r.n_datasets}});
  }
  write_file(dir / "ranking.json", rj.dump(2) + "\n");

  json hj = json::array();
  for (const auto& [axis, res] : b.split_half) {
    json row = {{"axis", name_of(axis)}, {"n_splits", res ? res->n_splits : 0}, {"seed", b.options.seed}};
    row["median_rho"] = res ? json(round2(res->median_rho)) : json(nullptr);
    hj.push_back(row);
  }
  write_file(dir / "splithalf.json", hj.dump(2) + "\n");

  write_file(dir / "forest.svg", forest_svg(sj));

  if (!b.warnings.empty()) {
    std::ostringstream w;
    for (const auto& s : b.warnings) w << s << '\n';
    write_file(dir / "warnings.txt", w.str());
  }
}

}  // namespace hteb::report
