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
#include <utility>
#include <vector>

#include <json.hpp>

#include "hteb/data/dataset.hpp"
#include "hteb/error.hpp"
#include "hteb/gateway/cache.hpp"
#include "hteb/gateway/gateway.hpp"
#include "hteb/language.hpp"
#include "hteb/transform/prompts.hpp"
#include "hteb/transform/sampling.hpp"

namespace hteb::transform {

inline constexpr std::int64_t kDefaultRunSeeds[] = {1337, 1338, 1339};

struct RunConfig {
  std::int64_t run_seed = 1337;
  std::string generator_id;
  std::vector<Language> translation_pool = transform::translation_pool();
  std::vector<Language> backtranslation_pool = transform::backtranslation_pool();
  int max_output_tokens = gateway::kDefaultMaxOutputTokens;
  bool send_seed = true;  // pass run_seed on the wire
};

struct TransformRecord {
  std::string dataset_id;
  std::string item_id;
  std::size_t item_index = 0;
  std::string field_role;
  TransformationId transformation = TransformationId::kParaphrasing;
  std::int64_t run_seed = 0;
  std::string generator_id;
  std::string source_text;
  Language source_language = Language::parse("eng");
  std::vector<std::string> sampled_languages;  // per step, English names
  std::vector<std::string> step_outputs;
  std::string final_text;
  int attempts = 0;
  std::string error;  // transport/protocol failure; empty when generated

  bool failed() const { return !error.empty(); }
  bool empty_output() const { return final_text.empty(); }
};

inline nlohmann::json to_json(const TransformRecord& r) {
  nlohmann::json j = {{"dataset_id", r.dataset_id},
                      {"item_id", r.item_id},
                      {"item_index", r.item_index},
                      {"field_role", r.field_role},
                      {"transformation", name_of(r.transformation)},
                      {"run_seed", r.run_seed},
                      {"generator_id", r.generator_id},
                      {"source_text", r.source_text},
                      {"source_language", r.source_language.name()},
                      {"sampled_languages", r.sampled_languages},
                      {"step_outputs", r.step_outputs},
                      {"final_text", r.final_text},
                      {"attempts", r.attempts}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline TransformRecord record_from_json(const nlohmann::json& j) {
  TransformRecord r;
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.item_id = j.at("item_id").get<std::string>();
  r.item_index = j.at("item_index").get<std::size_t>();
  r.field_role = j.at("field_role").get<std::string>();
  r.transformation = parse_transformation(j.at("transformation").get<std::string>());
  r.run_seed = j.at("run_seed").get<std::int64_t>();
  r.generator_id = j.value("generator_id", std::string());
  r.source_text = j.value("source_text", std::string());
  r.source_language = Language::parse(j.value("source_language", std::string("English")));
  r.sampled_languages = j.value("sampled_languages", std::vector<std::string>{});
  r.step_outputs = j.at("step_outputs").get<std::vector<std::string>>();
  r.final_text = j.at("final_text").get<std::string>();
  r.attempts = j.value("attempts", 0);
  r.error = j.value("error", std::string());
  return r;
}

/// Resolves the language for every step of `spec` on one text.
inline std::vector<Language> resolve_step_languages(const TransformationSpec& spec,
                                                    const Language& source, const RunConfig& cfg,
                                                    const DrawSite& site) {
  std::optional<Language> sampled;
  switch (spec.language_policy) {
    case LanguagePolicy::kKeepSource:
      break;
    case LanguagePolicy::kBatchTarget:
      sampled = sample_target_language(source, cfg.translation_pool, SamplingScope::kPerBatch,
                                       cfg.run_seed, site);
      break;
    case LanguagePolicy::kPerTextTarget:
      sampled = sample_target_language(source, cfg.translation_pool, SamplingScope::kPerText,
                                       cfg.run_seed, site);
      break;
    case LanguagePolicy::kIntermediateThenSource:
      sampled = sample_target_language(source, cfg.backtranslation_pool, SamplingScope::kPerText,
                                       cfg.run_seed, site);
      break;
  }
  std::vector<Language> out;
  for (const auto& step : spec.steps) {
    out.push_back(step.language_role == LanguageRole::kSource ? source : *sampled);
  }
  return out;
}

/// Runs the steps of `spec` on one text, feeding each output into the next
/// step. Generation failures are recorded on the result, never thrown.
inline TransformRecord apply_transformation(const std::string& text, const Language& source,
                                            const TransformationSpec& spec, const RunConfig& cfg,
                                            const DrawSite& site, gateway::Gateway& gw,
                                            const std::string& item_id = {}) {
  if (text.empty()) throw Error(Errc::kEmptyInput, "cannot transform an empty text");
  TransformRecord rec;
  rec.dataset_id = site.dataset_id;
  rec.item_id = item_id;
  rec.item_index = site.item_index;
  rec.field_role = site.field_role;
  rec.transformation = spec.id;
  rec.run_seed = cfg.run_seed;
  rec.generator_id = cfg.generator_id;
  rec.source_text = text;
  rec.source_language = source;

  const auto languages = resolve_step_languages(spec, source, cfg, site);
  for (const auto& l : languages) rec.sampled_languages.emplace_back(l.name());

  const std::string transformation_name(name_of(spec.id));
  std::string input = text;
  for (std::size_t step = 0; step < spec.steps.size(); ++step) {
    if (input.empty()) {
      rec.step_outputs.emplace_back();
      continue;
    }
    gateway::ChatRequest req;
    req.model_id = cfg.generator_id;
    req.prompt = render_prompt(spec.steps[step], languages[step]);
    req.input_text = input;
    req.max_output_tokens = cfg.max_output_tokens;
    if (cfg.send_seed) req.seed = cfg.run_seed;
    req.request_tag = transformation_name + "/" + std::to_string(step);
    const gateway::CacheSlot slot{
        cfg.generator_id, transformation_name,
        gateway::transform_cache_key(cfg.generator_id, transformation_name, static_cast<int>(step),
                                     req.prompt, input, cfg.run_seed)};
    try {
      const auto res = gw.chat_complete(req, &slot);
      rec.attempts += res.attempts;
      rec.step_outputs.push_back(res.output);
      input = res.output;
    } catch (const Error& e) {
      rec.error = e.what();
      rec.step_outputs.resize(spec.steps.size());
      input.clear();
      break;
    }
  }
  rec.final_text = rec.step_outputs.empty() ? std::string() : rec.step_outputs.back();
  return rec;
}

struct TransformedDataset {
  std::string dataset_id;
  TransformationId transformation = TransformationId::kParaphrasing;
  std::int64_t run_seed = 0;
  std::vector<TransformRecord> records;  // in text_slots order

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.failed() ? 1 : 0;
    return n;
  }

  /// Slot overrides for evaluation; failed slots keep their (empty) output.
  data::TextOverrides overrides() const {
    data::TextOverrides o;
    for (const auto& r : records) o[{r.field_role, r.item_index}] = r.final_text;
    return o;
  }
};

inline TransformedDataset transform_dataset(const data::EvalDataset& ds, const TransformationSpec& spec,
                                            const RunConfig& cfg, gateway::Gateway& gw) {
  const auto slots = data::text_slots(ds);
  TransformedDataset out{ds.id, spec.id, cfg.run_seed, {}};
  const std::string transformation_name(name_of(spec.id));
  out.records = gateway::parallel_map<TransformRecord>(slots.size(), gw.parallelism(), [&](std::size_t i) {
    const auto& slot = slots[i];
    const DrawSite site{ds.id, transformation_name, slot.item_index, slot.field};
    if (slot.text.empty()) {
      TransformRecord r;
      r.dataset_id = ds.id;
      r.item_id = slot.item_id;
      r.item_index = slot.item_index;
      r.field_role = slot.field;
      r.transformation = spec.id;
      r.run_seed = cfg.run_seed;
      r.generator_id = cfg.generator_id;
      r.source_language = slot.source;
      r.step_outputs.resize(spec.steps.size());
      r.error = "EmptyInput: source text is empty";
      return r;
    }
    try {
      return apply_transformation(slot.text, slot.source, spec, cfg, site, gw, slot.item_id);
    } catch (const Error& e) {
      TransformRecord r;
      r.dataset_id = ds.id;
      r.item_id = slot.item_id;
      r.item_index = slot.item_index;
      r.field_role = slot.field;
      r.transformation = spec.id;
      r.run_seed = cfg.run_seed;
      r.generator_id = cfg.generator_id;
      r.source_text = slot.text;
      r.source_language = slot.source;
      r.step_outputs.resize(spec.steps.size());
      r.error = e.what();
      return r;
    }
  });
  return out;
}

}  // namespace hteb::transform
