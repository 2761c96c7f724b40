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

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/score.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/taxonomy.hpp"

namespace hteb::report {

/// Mean and spread over runs of one (model, dataset, condition), in
/// percentage points.
struct RunAveraged {
  std::string model_id;
  std::string dataset_id;
  TaskKind task = TaskKind::kSTS;
  Condition condition;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n_runs = 0;
};

/// Conditions sort Original first, then in transformation order.
inline int condition_rank(const Condition& c) { return c ? static_cast<int>(*c) + 1 : 0; }

using CellKey = std::tuple<std::string, std::string, int>;  // model, dataset, condition rank

/// Run-averaged scores indexed by (model, dataset, condition).
class ScoreTable {
 public:
  void add(RunAveraged r) {
    const CellKey key{r.model_id, r.dataset_id, condition_rank(r.condition)};
    models_.insert(r.model_id);
    datasets_.insert(r.dataset_id);
    tasks_[r.dataset_id] = r.task;
    cells_[key] = std::move(r);
  }

  const RunAveraged* find(const std::string& model, const std::string& dataset, const Condition& c) const {
    const auto it = cells_.find({model, dataset, condition_rank(c)});
    return it == cells_.end() ? nullptr : &it->second;
  }

  double at(const std::string& model, const std::string& dataset, const Condition& c) const {
    const auto* r = find(model, dataset, c);
    if (r == nullptr) {
      throw Error(Errc::kMissingCondition, model + " / " + dataset + " / " + condition_name(c));
    }
    return r->mean;
  }

  bool complete(const std::string& model, const std::string& dataset,
                const std::vector<TransformationId>& transformations) const {
    if (!find(model, dataset, std::nullopt)) return false;
    for (auto t : transformations) {
      if (!find(model, dataset, t)) return false;
    }
    return true;
  }

  std::vector<std::string> models() const { return {models_.begin(), models_.end()}; }
  std::vector<std::string> datasets() const { return {datasets_.begin(), datasets_.end()}; }
  TaskKind task_of(const std::string& dataset) const { return tasks_.at(dataset); }
  std::vector<RunAveraged> cells() const {
    std::vector<RunAveraged> out;
    for (const auto& [k, v] : cells_) out.push_back(v);
    return out;
  }
  bool empty() const { return cells_.empty(); }

 private:
  std::map<CellKey, RunAveraged> cells_;
  std::set<std::string> models_;
  std::set<std::string> datasets_;
  std::map<std::string, TaskKind> tasks_;
};

/// Averages valid runs per (model, dataset, condition) and scales to
/// percentages. Failed cells are ignored; a key whose runs all failed is left
/// out. Runs are summed in seed order, so input order never matters.
inline ScoreTable average_runs(const std::vector<ScoreCell>& cells) {
  std::map<CellKey, std::vector<std::pair<std::int64_t, double>>> runs;
  std::map<CellKey, const ScoreCell*> first;
  for (const auto& c : cells) {
    if (!c.ok()) continue;
    const CellKey key{c.model_id, c.dataset_id, condition_rank(c.condition)};
    runs[key].emplace_back(c.run_seed, 100.0 * *c.value);
    first.try_emplace(key, &c);
  }
  ScoreTable table;
  for (auto& [key, values] : runs) {
    std::sort(values.begin(), values.end());
    std::vector<double> v;
    for (const auto& [seed, x] : values) v.push_back(x);
    const ScoreCell& c = *first.at(key);
    table.add({c.model_id, c.dataset_id, c.task, c.condition, stats::mean(v),
               v.size() > 1 ? stats::sample_sd(v) : 0.0, v.size()});
  }
  return table;
}

/// Keeps, per dataset, only models that have Original and every requested
/// transformation. Each dropped (model, dataset) is reported in `warnings`.
inline ScoreTable complete_cells(const ScoreTable& table, const std::vector<TransformationId>& transformations,
                                 std::vector<std::string>& warnings) {
  ScoreTable out;
  for (const auto& m : table.models()) {
    for (const auto& d : table.datasets()) {
      const bool any = table.find(m, d, std::nullopt) != nullptr ||
                       std::any_of(transformations.begin(), transformations.end(),
                                   [&](auto t) { return table.find(m, d, t) != nullptr; });
      if (!any) continue;
      if (!table.complete(m, d, transformations)) {
        warnings.push_back("excluding " + m + " on " + d + ": missing conditions");
        continue;
      }
      out.add(*table.find(m, d, std::nullopt));
      for (auto t : transformations) out.add(*table.find(m, d, t));
    }
  }
  return out;
}

inline std::vector<Axis> axes_of(const std::vector<TransformationId>& transformations) {
  std::vector<Axis> out;
  for (auto a : kAllAxes) {
    if (std::any_of(transformations.begin(), transformations.end(), [&](auto t) { return axis_of(t) == a; })) {
      out.push_back(a);
    }
  }
  return out;
}

inline std::vector<TransformationId> transformations_on(Axis axis, const std::vector<TransformationId>& ts) {
  std::vector<TransformationId> out;
  for (auto t : ts) {
    if (axis_of(t) == axis) out.push_back(t);
  }
  return out;
}

/// Unweighted mean of the axis scores.
inline double total_from_axes(const std::vector<double>& axis_scores) {
  if (axis_scores.empty()) throw Error(Errc::kEmptyInput, "no axis scores");
  return stats::mean(axis_scores);
}

struct ModelScores {
  std::string model_id;
  double original = 0.0;
  std::map<Axis, double> axes;
  double total = 0.0;
  std::size_t n_datasets = 0;

  double delta() const { return total - original; }
  double axis_delta(Axis a) const { return axes.at(a) - original; }
};

/// Original = mean over datasets; axis = mean over its transformations of
/// the dataset mean; total = mean of the axes.
inline ModelScores axis_and_total_scores(const ScoreTable& table, const std::string& model,
                                         const std::vector<TransformationId>& transformations =
                                             {kAllTransformations.begin(), kAllTransformations.end()}) {
  std::vector<std::string> datasets;
  for (const auto& d : table.datasets()) {
    const bool any = table.find(model, d, std::nullopt) != nullptr ||
                     std::any_of(transformations.begin(), transformations.end(),
                                 [&](auto t) { return table.find(model, d, t) != nullptr; });
    if (any) datasets.push_back(d);
  }
  if (datasets.empty()) throw Error(Errc::kMissingCondition, "no scores for model " + model);
  auto dataset_mean = [&](const Condition& c) {
    std::vector<double> v;
    for (const auto& d : datasets) v.push_back(table.at(model, d, c));
    return stats::mean(v);
  };
  ModelScores s;
  s.model_id = model;
  s.n_datasets = datasets.size();
  s.original = dataset_mean(std::nullopt);
  std::vector<double> axis_values;
  for (auto a : axes_of(transformations)) {
    std::vector<double> per_t;
    for (auto t : transformations_on(a, transformations)) per_t.push_back(dataset_mean(t));
    s.axes[a] = stats::mean(per_t);
    axis_values.push_back(s.axes[a]);
  }
  s.total = total_from_axes(axis_values);
  return s;
}

/// Per-dataset HTEB score of one model: mean over axes of the mean over the
/// axis's transformations.
inline double dataset_hteb(const ScoreTable& table, const std::string& model, const std::string& dataset,
                           const std::vector<TransformationId>& transformations) {
  std::vector<double> axis_values;
  for (auto a : axes_of(transformations)) {
    std::vector<double> v;
    for (auto t : transformations_on(a, transformations)) v.push_back(table.at(model, dataset, t));
    axis_values.push_back(stats::mean(v));
  }
  return total_from_axes(axis_values);
}

struct DeltaRow {
  std::string model_id;
  TransformationId transformation;
  double delta = 0.0;  // percentage points, negative = degradation
};

/// Mean over datasets of (transformed - original) per (model, transformation).
inline std::vector<DeltaRow> transformation_delta_table(const ScoreTable& table,
                                                        const std::vector<TransformationId>& transformations) {
  std::vector<DeltaRow> out;
  for (const auto& m : table.models()) {
    for (auto t : transformations) {
      std::vector<double> d;
      for (const auto& ds : table.datasets()) {
        const auto* o = table.find(m, ds, std::nullopt);
        const auto* x = table.find(m, ds, t);
        if (o == nullptr && x == nullptr) continue;
        if (o == nullptr || x == nullptr) {
          throw Error(Errc::kMissingCondition, m + " / " + ds + " lacks Original or " + condition_name(t));
        }
        d.push_back(x->mean - o->mean);
      }
      if (!d.empty()) out.push_back({m, t, stats::mean(d)});
    }
  }
  return out;
}

}  // namespace hteb::report
