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
#include <optional>
#include <string>

#include "hteb/taxonomy.hpp"

namespace hteb {

/// One (model, dataset, condition, run) score.
struct ScoreCell {
  std::string model_id;
  std::string dataset_id;
  TaskKind task = TaskKind::kSTS;
  Condition condition;
  std::int64_t run_seed = 0;
  std::string metric;
  /// Absent when the evaluator failed; `error` then says why.
  std::optional<double> value;
  std::string error;

  bool ok() const { return value.has_value(); }
};

}  // namespace hteb
