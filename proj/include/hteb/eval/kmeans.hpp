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

#include <cstdint>
#include <limits>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/hashing.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::eval {

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 1337;
};

struct KMeansResult {
  std::vector<std::size_t> assignment;
  std::vector<Vector> centroids;
  double inertia = 0.0;
};

namespace detail {

inline double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// k-means++ seeding followed by Lloyd iterations.
inline KMeansResult lloyd(const std::vector<Vector>& x, std::size_t k, std::size_t max_iterations, Rng& rng) {
  const std::size_t n = x.size();
  std::vector<Vector> c;
  c.push_back(x[rng.index(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x[i], c[0]);
  while (c.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.index(n);
    } else {
      double u = rng.unit() * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        u -= d2[pick];
        if (u < 0.0) break;
      }
    }
    c.push_back(x[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x[i], c.back()));
  }

  KMeansResult r;
  r.assignment.assign(n, 0);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = it == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = squared_distance(x[i], c[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (r.assignment[i] != best) changed = true;
      r.assignment[i] = best;
    }
    if (!changed) break;
    std::vector<Vector> sums(k, Vector(x[0].size(), 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < x[i].size(); ++d) sums[r.assignment[i]][d] += x[i][d];
      ++counts[r.assignment[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;  // empty cluster keeps its centroid
      for (auto& v : sums[j]) v /= static_cast<double>(counts[j]);
      c[j] = std::move(sums[j]);
    }
  }
  r.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) r.inertia += squared_distance(x[i], c[r.assignment[i]]);
  r.centroids = std::move(c);
  return r;
}

}  // namespace detail

/// Best-inertia result over seeded restarts.
inline KMeansResult kmeans(const std::vector<Vector>& x, std::size_t k, const KMeansOptions& opt = {}) {
  if (k == 0 || x.size() < k) throw Error(Errc::kDegenerate, "k-means needs at least k points");
  for (const auto& row : x) {
    if (row.size() != x.front().size()) throw Error(Errc::kDimensionMismatch, "ragged k-means input");
  }
  Rng rng(opt.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, opt.restarts); ++r) {
    auto res = detail::lloyd(x, k, opt.max_iterations, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

}  // namespace hteb::eval
