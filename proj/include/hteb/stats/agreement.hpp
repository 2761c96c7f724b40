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

#include <optional>
#include <span>
#include <vector>

#include "hteb/error.hpp"

namespace hteb::stats {

struct AgreementResult {
  double ac2 = 0.0;
  std::size_t n_items = 0;
  std::size_t n_raters = 0;
  std::size_t n_categories = 0;
};

/// Ordinal weights over q ordered categories:
/// w(k, l) = 1 - C(|k - l| + 1, 2) / C(q, 2).
inline std::vector<std::vector<double>> ordinal_weights(std::size_t q) {
  if (q < 2) throw Error(Errc::kInvalidArgument, "ordinal weights need at least two categories");
  const auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
  const double denom = choose2(static_cast<double>(q));
  std::vector<std::vector<double>> w(q, std::vector<double>(q));
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t l = 0; l < q; ++l) {
      const double d = k > l ? static_cast<double>(k - l) : static_cast<double>(l - k);
      w[k][l] = 1.0 - choose2(d + 1.0) / denom;
    }
  }
  return w;
}

using RatingMatrix = std::vector<std::vector<std::optional<int>>>;  // item x rater

/// Gwet's AC2 with ordinal weights for an item x rater matrix with gaps.
/// `categories` lists the admissible ratings in their natural order.
inline AgreementResult gwet_ac2(const RatingMatrix& ratings, std::span<const int> categories) {
  const std::size_t q = categories.size();
  if (q < 2) throw Error(Errc::kInvalidArgument, "need at least two categories");
  const auto w = ordinal_weights(q);
  auto position = [&](int value) -> std::size_t {
    for (std::size_t k = 0; k < q; ++k) {
      if (categories[k] == value) return k;
    }
    throw Error(Errc::kOutOfRange, "rating outside declared categories");
  };

  std::size_t raters = 0;
  std::vector<std::vector<double>> counts;  // r_ik for items with at least one rating
  for (const auto& row : ratings) {
    raters = std::max(raters, row.size());
    std::vector<double> r(q, 0.0);
    bool any = false;
    for (const auto& v : row) {
      if (!v) continue;
      r[position(*v)] += 1.0;
      any = true;
    }
    if (any) counts.push_back(std::move(r));
  }

  double pa_sum = 0.0;
  std::size_t multi = 0;
  std::vector<double> pi(q, 0.0);
  for (const auto& r : counts) {
    double ri = 0.0;
    for (double c : r) ri += c;
    for (std::size_t k = 0; k < q; ++k) pi[k] += r[k] / ri;
    if (ri < 2.0) continue;
    ++multi;
    double agree = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      double weighted = 0.0;
      for (std::size_t l = 0; l < q; ++l) weighted += w[k][l] * r[l];
      agree += r[k] * (weighted - 1.0);
    }
    pa_sum += agree / (ri * (ri - 1.0));
  }
  if (multi == 0) throw Error(Errc::kInsufficientRaters, "no item has two or more ratings");

  const auto n = static_cast<double>(counts.size());
  double weight_total = 0.0;
  for (const auto& row : w) {
    for (double x : row) weight_total += x;
  }
  double spread = 0.0;
  for (double p : pi) spread += (p / n) * (1.0 - p / n);
  const double pa = pa_sum / static_cast<double>(multi);
  const double pe = weight_total * spread / (static_cast<double>(q) * static_cast<double>(q - 1));
  if (pe >= 1.0) throw Error(Errc::kDegenerate, "chance agreement equals one");

  return {(pa - pe) / (1.0 - pe), counts.size(), raters, q};
}

}  // namespace hteb::stats
