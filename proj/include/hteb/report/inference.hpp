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
#include <map>
#include <string>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/report/aggregate.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/stats/holm.hpp"
#include "hteb/stats/signed_rank.hpp"
#include "hteb/stats/split_half.hpp"

namespace hteb::report {

inline constexpr std::size_t kDefaultMinDatasets = 5;

struct TransformationStat {
  TransformationId transformation;
  double hl_shift = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_raw = 1.0;
  double p_holm = 1.0;
  double median_abs_delta = 0.0;
  std::size_t n = 0;
};

struct AxisStat {
  Axis axis;
  double median_abs_delta = 0.0;  // pooled over the axis's transformations
  std::size_t n = 0;
};

struct StatReport {
  std::vector<TransformationStat> transformations;
  std::vector<AxisStat> axes;
};

/// Dataset-level paired deltas for one transformation: per dataset, the mean
/// over models of (transformed - original), runs already averaged.
inline std::vector<double> dataset_deltas(const ScoreTable& table, TransformationId t) {
  std::vector<double> out;
  for (const auto& d : table.datasets()) {
    std::vector<double> per_model;
    for (const auto& m : table.models()) {
      const auto* o = table.find(m, d, std::nullopt);
      const auto* x = table.find(m, d, t);
      if (o && x) per_model.push_back(x->mean - o->mean);
    }
    if (!per_model.empty()) out.push_back(stats::mean(per_model));
  }
  return out;
}

inline double median_abs(const std::vector<double>& v) {
  std::vector<double> a;
  for (double x : v) a.push_back(std::fabs(x));
  return stats::median(a);
}

/// Wilcoxon signed-rank and Hodges-Lehmann per transformation; the p-values
/// are Holm-corrected as one family, the CIs are not adjusted.
inline StatReport per_transformation_inference(const ScoreTable& table,
                                               const std::vector<TransformationId>& transformations,
                                               std::size_t min_datasets = kDefaultMinDatasets,
                                               double confidence = 0.95) {
  StatReport rep;
  std::map<Axis, std::vector<double>> pooled;
  std::vector<double> raw;
  for (auto t : transformations) {
    const auto d = dataset_deltas(table, t);
    if (d.size() < min_datasets) {
      throw Error(Errc::kTooFewDatasets, std::string(name_of(t)) + " has " + std::to_string(d.size()) +
                                             " datasets, need " + std::to_string(min_datasets));
    }
    TransformationStat s;
    s.transformation = t;
    s.n = d.size();
    try {
      s.p_raw = stats::wilcoxon_signed_rank(d).p_value;
    } catch (const Error& e) {
      if (e.code() != Errc::kAllZero) throw;
      s.p_raw = 1.0;
    }
    const auto hl = stats::hodges_lehmann(d, confidence);
    s.hl_shift = hl.shift;
    s.ci_low = hl.ci_low;
    s.ci_high = hl.ci_high;
    s.median_abs_delta = median_abs(d);
    raw.push_back(s.p_raw);
    pooled[axis_of(t)].insert(pooled[axis_of(t)].end(), d.begin(), d.end());
    rep.transformations.push_back(s);
  }
  if (!raw.empty()) {
    const auto adj = stats::holm_correct(raw);
    for (std::size_t i = 0; i < adj.size(); ++i) rep.transformations[i].p_holm = adj[i];
  }
  for (const auto& [axis, d] : pooled) rep.axes.push_back({axis, median_abs(d), d.size()});
  return rep;
}

/// What a ranking-stability row compares against Original.
struct RankTarget {
  enum class Kind { kTransformation, kAxis, kOverall } kind = Kind::kOverall;
  TransformationId transformation = TransformationId::kParaphrasing;
  Axis axis = Axis::kLexicalStylistic;

  std::string name() const {
    switch (kind) {
      case Kind::kTransformation: return std::string(name_of(transformation));
      case Kind::kAxis: return std::string(name_of(axis));
      case Kind::kOverall: return "Overall";
    }
    return "";
  }
};

struct RankingRow {
  RankTarget target;
  double mean_tau = 0.0;
  double sd_tau = 0.0;  // sample sd; 0 with a single dataset
  std::size_t n_datasets = 0;
};

/// Per dataset, Kendall tau-b between the models' Original scores and their
/// scores under `target`; summarised as mean and sample sd over datasets.
/// Datasets with fewer than 2 models or an undefined tau are skipped.
inline RankingRow ranking_row(const ScoreTable& table, const RankTarget& target,
                              const std::vector<TransformationId>& transformations) {
  std::vector<double> taus;
  for (const auto& d : table.datasets()) {
    std::vector<double> orig, trans;
    for (const auto& m : table.models()) {
      if (!table.complete(m, d, transformations)) continue;
      orig.push_back(table.at(m, d, std::nullopt));
      switch (target.kind) {
        case RankTarget::Kind::kTransformation: trans.push_back(table.at(m, d, target.transformation)); break;
        case RankTarget::Kind::kAxis: {
          std::vector<double> v;
          for (auto t : transformations_on(target.axis, transformations)) v.push_back(table.at(m, d, t));
          trans.push_back(stats::mean(v));
          break;
        }
        case RankTarget::Kind::kOverall: trans.push_back(dataset_hteb(table, m, d, transformations)); break;
      }
    }
    if (orig.size() < 2) continue;
    try {
      taus.push_back(stats::kendall_tau(orig, trans));
    } catch (const Error& e) {
      if (e.code() != Errc::kDegenerate) throw;
    }
  }
  if (taus.empty()) throw Error(Errc::kTooFewModels, "no dataset has two comparable models for " + target.name());
  return {target, stats::mean(taus), taus.size() > 1 ? stats::sample_sd(taus) : 0.0, taus.size()};
}

/// Rows for every transformation, every axis and the overall HTEB score.
inline std::vector<RankingRow> ranking_stability(const ScoreTable& table,
                                                 const std::vector<TransformationId>& transformations) {
  std::vector<RankingRow> out;
  for (auto a : axes_of(transformations)) {
    out.push_back(ranking_row(table, {RankTarget::Kind::kAxis, TransformationId::kParaphrasing, a}, transformations));
    for (auto t : transformations_on(a, transformations)) {
      out.push_back(ranking_row(table, {RankTarget::Kind::kTransformation, t, a}, transformations));
    }
  }
  out.push_back(ranking_row(table, {}, transformations));
  return out;
}

struct SplitHalfRow {
  Axis axis;
  stats::SplitHalfResult result;
};

/// Split-half input for one axis: per dataset, each model's mean over the
/// axis's transformations. Only models complete on every dataset are used.
inline stats::SplitHalfInput split_half_input(const ScoreTable& table, Axis axis,
                                              const std::vector<TransformationId>& transformations) {
  stats::SplitHalfInput in;
  for (const auto& m : table.models()) {
    bool everywhere = true;
    for (const auto& d : table.datasets()) everywhere = everywhere && table.complete(m, d, transformations);
    if (everywhere) in.models.push_back(m);
  }
  for (const auto& d : table.datasets()) {
    stats::StratumDataset sd{d, std::string(name_of(table.task_of(d))), {}};
    for (const auto& m : in.models) {
      std::vector<double> v;
      for (auto t : transformations_on(axis, transformations)) v.push_back(table.at(m, d, t));
      sd.model_scores.push_back(stats::mean(v));
    }
    in.datasets.push_back(std::move(sd));
  }
  return in;
}

inline std::vector<SplitHalfRow> split_half_by_axis(const ScoreTable& table,
                                                    const std::vector<TransformationId>& transformations,
                                                    std::size_t n_splits, std::uint64_t seed) {
  std::vector<SplitHalfRow> out;
  for (auto a : axes_of(transformations)) {
    out.push_back({a, stats::split_half_reliability(split_half_input(table, a, transformations), n_splits, seed)});
  }
  return out;
}

}  // namespace hteb::report
