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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hteb/error.hpp"

namespace hteb::eval {

/// Indices sorted by descending score; equal scores keep input order.
inline std::vector<std::size_t> rank_descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

/// Mean of precision@rank over the positive ranks of a ranked list.
inline double average_precision_ranked(const std::vector<bool>& relevant_in_rank_order) {
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < relevant_in_rank_order.size(); ++i) {
    if (!relevant_in_rank_order[i]) continue;
    hits += 1.0;
    sum += hits / static_cast<double>(i + 1);
  }
  if (hits == 0.0) throw Error(Errc::kNoPositives, "ranking contains no relevant item");
  return sum / hits;
}

inline double average_precision(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw Error(Errc::kLengthMismatch, "scores and labels differ in length");
  std::vector<bool> ranked;
  ranked.reserve(labels.size());
  for (auto i : rank_descending(scores)) ranked.push_back(labels[i]);
  return average_precision_ranked(ranked);
}

/// nDCG@k with linear gain: DCG = sum rel_i / log2(i + 1) over ranks 1..k.
/// `all_grades` supplies the ideal ordering (including relevant items that
/// were not retrieved).
inline double ndcg_at_k(const std::vector<double>& grades_in_rank_order, std::vector<double> all_grades,
                        std::size_t k = 10) {
  auto dcg = [k](const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(k, g.size()); ++i) s += g[i] / std::log2(static_cast<double>(i) + 2.0);
    return s;
  };
  std::sort(all_grades.begin(), all_grades.end(), std::greater<>());
  const double ideal = dcg(all_grades);
  if (ideal <= 0.0) throw Error(Errc::kNoPositives, "query has no relevant document");
  return dcg(grades_in_rank_order) / ideal;
}

inline double accuracy(const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw Error(Errc::kLengthMismatch, "truth and predictions differ in length");
  if (truth.empty()) throw Error(Errc::kEmptyInput, "accuracy over no items");
  std::size_t right = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) right += truth[i] == predicted[i] ? 1 : 0;
  return static_cast<double>(right) / static_cast<double>(truth.size());
}

struct VMeasure {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v = 0.0;
};

/// Entropy-based homogeneity, completeness and their harmonic mean (beta 1).
/// Conventions: homogeneity is 1 when the classes carry no entropy,
/// completeness is 1 when the clusters carry none.
template <typename A, typename B>
VMeasure v_measure(const std::vector<A>& classes, const std::vector<B>& clusters) {
  if (classes.size() != clusters.size()) throw Error(Errc::kLengthMismatch, "labels differ in length");
  if (classes.empty()) throw Error(Errc::kEmptyInput, "V-measure over no items");
  std::map<A, std::size_t> ci;
  std::map<B, std::size_t> ki;
  for (const auto& c : classes) ci.emplace(c, ci.size());
  for (const auto& k : clusters) ki.emplace(k, ki.size());
  std::vector<std::vector<double>> n(ci.size(), std::vector<double>(ki.size(), 0.0));
  for (std::size_t i = 0; i < classes.size(); ++i) n[ci.at(classes[i])][ki.at(clusters[i])] += 1.0;
  const double total = static_cast<double>(classes.size());
  std::vector<double> nc(ci.size(), 0.0), nk(ki.size(), 0.0);
  for (std::size_t c = 0; c < n.size(); ++c) {
    for (std::size_t k = 0; k < n[c].size(); ++k) {
      nc[c] += n[c][k];
      nk[k] += n[c][k];
    }
  }
  auto entropy = [total](const std::vector<double>& counts) {
    double h = 0.0;
    for (double x : counts) {
      if (x > 0.0) h -= x / total * std::log(x / total);
    }
    return h;
  };
  const double h_c = entropy(nc);
  const double h_k = entropy(nk);
  double h_c_given_k = 0.0, h_k_given_c = 0.0;
  for (std::size_t c = 0; c < n.size(); ++c) {
    for (std::size_t k = 0; k < n[c].size(); ++k) {
      const double x = n[c][k];
      if (x == 0.0) continue;
      h_c_given_k -= x / total * std::log(x / nk[k]);
      h_k_given_c -= x / total * std::log(x / nc[c]);
    }
  }
  VMeasure r;
  r.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
  r.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
  const double s = r.homogeneity + r.completeness;
  r.v = s == 0.0 ? 0.0 : 2.0 * r.homogeneity * r.completeness / s;
  return r;
}

}  // namespace hteb::eval
