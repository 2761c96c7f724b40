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

#include "hteb/error.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::stats {

/// Embedding drift 1 - cos(original, transformed), in [0, 2].
inline double embedding_drift(const Vector& original, const Vector& transformed) {
  const double na = norm(original);
  const double nb = norm(transformed);
  if (na == 0.0 || nb == 0.0) throw Error(Errc::kZeroVector, "drift of a zero vector");
  const double cos = std::clamp(dot(original, transformed) / (na * nb), -1.0, 1.0);
  return 1.0 - cos;
}

}  // namespace hteb::stats
