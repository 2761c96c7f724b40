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
#include <span>
#include <utility>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/hashing.hpp"
#include "hteb/stats/descriptive.hpp"

namespace hteb::stats {

inline constexpr std::size_t kDefaultBootstrapResamples = 10000;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Means of B resamples (with replacement) drawn from a seeded index stream.
inline std::vector<double> bootstrap_means(std::span<const double> values, std::size_t resamples,
                                           std::uint64_t seed) {
  const std::size_t n = values.size();
  Rng rng(seed);
  std::vector<double> means(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[rng.index(n)];
    means[b] = sum / static_cast<double>(n);
  }
  return means;
}

/// Percentile bootstrap confidence interval for the mean.
inline Interval percentile_bootstrap_ci(std::span<const double> values,
                                        std::size_t resamples = kDefaultBootstrapResamples,
                                        double confidence = 0.95, std::uint64_t seed = 1337) {
  if (values.size() < 2) throw Error(Errc::kTooFew, "bootstrap needs at least two values");
  if (resamples == 0) throw Error(Errc::kInvalidArgument, "bootstrap needs at least one resample");
  auto means = bootstrap_means(values, resamples, seed);
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - confidence;
  return {quantile_sorted(means, alpha / 2.0), quantile_sorted(means, 1.0 - alpha / 2.0)};
}

/// Two-sided paired bootstrap p-value for a zero mean difference a - b:
/// 2 * min(share of resampled means <= 0, share >= 0), floored at 1/B.
inline double paired_bootstrap_p(std::span<const double> a, std::span<const double> b,
                                 std::size_t resamples = kDefaultBootstrapResamples,
                                 std::uint64_t seed = 1337) {
  if (a.size() != b.size()) throw Error(Errc::kLengthMismatch, "paired samples differ in length");
  if (a.size() < 2) throw Error(Errc::kTooFew, "paired bootstrap needs at least two pairs");
  if (resamples == 0) throw Error(Errc::kInvalidArgument, "bootstrap needs at least one resample");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto means = bootstrap_means(diff, resamples, seed);
  std::size_t le = 0, ge = 0;
  for (double m : means) {
    if (m <= 0.0) ++le;
    if (m >= 0.0) ++ge;
  }
  const auto B = static_cast<double>(resamples);
  const double p = 2.0 * static_cast<double>(std::min(le, ge)) / B;
  return std::clamp(p, 1.0 / B, 1.0);
}

}  // namespace hteb::stats
