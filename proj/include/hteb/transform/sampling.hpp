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
#include <string>
#include <string_view>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/hashing.hpp"
#include "hteb/language.hpp"

namespace hteb::transform {

enum class SamplingScope { kPerBatch, kPerText };

inline std::vector<Language> translation_pool() {
  return parse_languages({"Spanish", "French", "German", "Turkish", "Arabic"});
}

inline std::vector<Language> backtranslation_pool() {
  return parse_languages({"English", "Spanish", "French", "German", "Turkish", "Arabic"});
}

/// Where a draw happens. PerBatch draws ignore item_index and field_role.
struct DrawSite {
  std::string dataset_id;
  std::string transformation_id;
  std::size_t item_index = 0;
  std::string field_role;
};

/// Counter-based language draw: a pure function of (run seed, dataset,
/// transformation, item/field for per-text scope), never the source language.
inline Language sample_target_language(const Language& source, const std::vector<Language>& pool,
                                       SamplingScope scope, std::int64_t run_seed,
                                       const DrawSite& site) {
  std::vector<Language> candidates;
  for (const auto& l : pool) {
    if (!l.same_language(source)) candidates.push_back(l);
  }
  if (candidates.empty()) throw Error(Errc::kEmptyPool, "language pool empty after excluding source");
  const std::string seed = std::to_string(run_seed);
  std::uint64_t u = 0;
  if (scope == SamplingScope::kPerBatch) {
    u = keyed_u64({"language", seed, site.dataset_id, site.transformation_id, "batch"});
  } else {
    const std::string index = std::to_string(site.item_index);
    u = keyed_u64({"language", seed, site.dataset_id, site.transformation_id, index, site.field_role});
  }
  return candidates[bounded_index(u, candidates.size())];
}

}  // namespace hteb::transform
