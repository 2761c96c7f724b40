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
#include <cstdint>
#include <span>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "hteb/error.hpp"
#include "hteb/stats/descriptive.hpp"

namespace hteb::stats {

/// Largest sample size handled by the exact null distribution.
inline constexpr std::size_t kExactSignedRankLimit = 25;

struct SignedRankResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;  // nonzero deltas used
  bool exact = true;
};

namespace detail {

/// Number of sign assignments reaching each doubled positive-rank sum.
/// Ranks are passed doubled so tied (half-integer) ranks stay integral.
inline std::vector<double> signed_rank_counts(std::span<const int> doubled_ranks) {
  int total = 0;
  for (int r : doubled_ranks) total += r;
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : doubled_ranks) {
    for (int s = reach; s >= 0; --s) {
      if (counts[static_cast<std::size_t>(s)] != 0.0) {
        counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
      }
    }
    reach += r;
  }
  return counts;
}

inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace detail

/// Two-sided Wilcoxon signed-rank test. Zeros are dropped, tied magnitudes
/// share average ranks. Exact null distribution up to 25 nonzero deltas,
/// normal approximation with continuity and tie correction beyond.
inline SignedRankResult wilcoxon_signed_rank(std::span<const double> deltas) {
  std::vector<double> nz;
  for (double d : deltas) {
    if (!std::isfinite(d)) throw Error(Errc::kInvalidArgument, "non-finite delta");
    if (d != 0.0) nz.push_back(d);
  }
  if (nz.empty()) throw Error(Errc::kAllZero, "every delta is zero");

  std::vector<double> mags(nz.size());
  std::transform(nz.begin(), nz.end(), mags.begin(), [](double d) { return std::fabs(d); });
  const auto ranks = average_ranks(mags);

  SignedRankResult out;
  out.n = nz.size();
  for (std::size_t i = 0; i < nz.size(); ++i) {
    (nz[i] > 0.0 ? out.w_plus : out.w_minus) += ranks[i];
  }
  out.statistic = std::min(out.w_plus, out.w_minus);

  if (out.n <= kExactSignedRankLimit) {
    std::vector<int> doubled(ranks.size());
    std::transform(ranks.begin(), ranks.end(), doubled.begin(),
                   [](double r) { return static_cast<int>(std::lround(2.0 * r)); });
    const auto counts = detail::signed_rank_counts(doubled);
    const auto observed = static_cast<std::size_t>(std::lround(2.0 * out.w_plus));
    double below = 0.0, above = 0.0, total = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      total += counts[s];
      if (s <= observed) below += counts[s];
      if (s >= observed) above += counts[s];
    }
    out.p_value = std::min(1.0, 2.0 * std::min(below, above) / total);
    out.exact = true;
    return out;
  }

  const auto n = static_cast<double>(out.n);
  const double mu = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  const double dev = std::max(0.0, std::fabs(out.w_plus - mu) - 0.5);
  out.p_value = var > 0.0 ? std::min(1.0, 2.0 * detail::normal_upper_tail(dev / std::sqrt(var))) : 1.0;
  out.exact = false;
  return out;
}

struct HodgesLehmannResult {
  double shift = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Walsh averages (x_i + x_j) / 2 for i <= j, sorted ascending.
inline std::vector<double> walsh_averages(std::span<const double> xs) {
  std::vector<double> w;
  w.reserve(xs.size() * (xs.size() + 1) / 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) w.push_back((xs[i] + xs[j]) / 2.0);
  }
  std::sort(w.begin(), w.end());
  return w;
}

/// Number of Walsh averages trimmed from each end of the confidence interval:
/// the largest c with P(T <= c) <= alpha/2 under the untied signed-rank null,
/// or 0 when no such c exists (tiny samples keep the full Walsh range).
inline std::size_t walsh_trim_count(std::size_t n, double confidence) {
  const double half_alpha = (1.0 - confidence) / 2.0;
  if (n <= kExactSignedRankLimit) {
    std::vector<int> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = static_cast<int>(2 * (i + 1));
    const auto counts = detail::signed_rank_counts(doubled);
    const double total = std::ldexp(1.0, static_cast<int>(n));
    double cum = 0.0;
    std::size_t trim = 0;
    for (std::size_t s = 0; s < counts.size(); s += 2) {
      cum += counts[s];
      if (cum / total > half_alpha) break;
      trim = s / 2;
    }
    return trim;
  }
  const auto nd = static_cast<double>(n);
  const double mu = nd * (nd + 1.0) / 4.0;
  const double sigma = std::sqrt(nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0);
  const double c = std::floor(mu - detail::normal_quantile(1.0 - half_alpha) * sigma - 0.5);
  return c < 0.0 ? 0 : static_cast<std::size_t>(c);
}

/// Hodges-Lehmann location shift: median of the Walsh averages, with the
/// distribution-free confidence interval read off the sorted Walsh averages.
inline HodgesLehmannResult hodges_lehmann(std::span<const double> deltas, double confidence = 0.95) {
  if (deltas.empty()) throw Error(Errc::kTooFew, "hodges-lehmann needs at least one delta");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(Errc::kInvalidArgument, "confidence must lie in (0, 1)");
  }
  const auto w = walsh_averages(deltas);
  const std::size_t m = w.size();
  HodgesLehmannResult out;
  out.shift = m % 2 == 1 ? w[m / 2] : (w[m / 2 - 1] + w[m / 2]) / 2.0;
  std::size_t trim = walsh_trim_count(deltas.size(), confidence);
  trim = std::min(trim, (m - 1) / 2);
  out.ci_low = w[trim];
  out.ci_high = w[m - 1 - trim];
  return out;
}

}  // namespace hteb::stats
