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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/hashing.hpp"
#include "hteb/stats/descriptive.hpp"

namespace hteb::stats {

inline constexpr std::size_t kDefaultSplits = 1000;

/// One dataset's per-model score on a single axis (runs already averaged).
struct StratumDataset {
  std::string id;
  std::string task;
  std::vector<double> model_scores;  // indexed like SplitHalfInput::models
};

struct SplitHalfInput {
  std::vector<std::string> models;
  std::vector<StratumDataset> datasets;
};

struct SplitHalfResult {
  double median_rho = 0.0;
  std::size_t n_splits = 0;  // splits that produced a defined correlation
  std::uint64_t seed = 0;
};

/// Task-stratified split-half reliability: for each split, every task's
/// datasets are shuffled and dealt into two halves, an odd one out going to a
/// coin-chosen half; the Spearman correlation of per-model half means is taken
/// and the median over splits returned. Each split draws from its own seed, so
/// the result does not depend on evaluation order.
inline SplitHalfResult split_half_reliability(const SplitHalfInput& input,
                                              std::size_t n_splits = kDefaultSplits,
                                              std::uint64_t seed = 1337) {
  const std::size_t n_models = input.models.size();
  if (n_models < 3) throw Error(Errc::kTooFewModels, "split-half needs at least three models");
  for (const auto& ds : input.datasets) {
    if (ds.model_scores.size() != n_models) {
      throw Error(Errc::kLengthMismatch, "dataset " + ds.id + " lacks scores for some models");
    }
  }

  std::map<std::string, std::vector<std::size_t>> strata;
  {
    std::vector<std::size_t> order(input.datasets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return input.datasets[a].id < input.datasets[b].id;
    });
    for (std::size_t i : order) strata[input.datasets[i].task].push_back(i);
  }

  std::vector<double> rhos;
  for (std::size_t s = 0; s < n_splits; ++s) {
    Rng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s) + 1)));
    std::vector<double> a(n_models, 0.0), b(n_models, 0.0);
    std::size_t na = 0, nb = 0;
    auto add = [&](std::vector<double>& half, std::size_t& count, std::size_t ds) {
      for (std::size_t m = 0; m < n_models; ++m) half[m] += input.datasets[ds].model_scores[m];
      ++count;
    };
    for (const auto& [task, members] : strata) {
      std::vector<std::size_t> shuffled = members;
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
      }
      const std::size_t half = shuffled.size() / 2;
      for (std::size_t i = 0; i < half; ++i) add(a, na, shuffled[i]);
      for (std::size_t i = half; i < 2 * half; ++i) add(b, nb, shuffled[i]);
      if (shuffled.size() % 2 == 1) {
        if (rng.index(2) == 0) {
          add(a, na, shuffled.back());
        } else {
          add(b, nb, shuffled.back());
        }
      }
    }
    if (na == 0 || nb == 0) continue;
    for (auto& v : a) v /= static_cast<double>(na);
    for (auto& v : b) v /= static_cast<double>(nb);
    try {
      rhos.push_back(spearman_rho(a, b));
    } catch (const Error& e) {
      if (e.code() != Errc::kDegenerate) throw;
    }
  }
  if (rhos.empty()) throw Error(Errc::kDegenerate, "no split produced a defined correlation");
  const std::size_t valid = rhos.size();
  return {median(std::move(rhos)), valid, seed};
}

}  // namespace hteb::stats
