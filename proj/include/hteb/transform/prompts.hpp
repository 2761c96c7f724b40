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

#include <string>
#include <string_view>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/language.hpp"
#include "hteb/taxonomy.hpp"

namespace hteb::transform {

inline constexpr std::string_view kPlaceholder = "{target_language}";

namespace prompts {

inline constexpr std::string_view kParaphrasing =
    "Rephrase the following text while keeping its original meaning. IMPORTANT: You MUST answer "
    "in {target_language}. Do NOT translate the text to English or any other language. Only reply "
    "with the paraphrased text and only provide a single response -- no alternatives! Do not "
    "include explanations or notes.";

inline constexpr std::string_view kStyleChange =
    "Change the style of the following text. If the text is casual or informal, rewrite it in a "
    "formal style. If the text is formal or scientific, rewrite it in a casual or informal style. "
    "Preserve the original meaning while changing only the tone, style, and vocabulary. "
    "IMPORTANT: You MUST answer in {target_language}. Do NOT translate the text to English or any "
    "other language. Only reply with the rewritten text -- no explanations or notes!";

inline constexpr std::string_view kExpansion =
    "Expand the following text by adding more details, context, and elaboration while preserving "
    "the same core meaning. IMPORTANT: If the input is a question, your output must also be a "
    "question -- do NOT answer it. If the input is a statement, your output must also be a "
    "statement. IMPORTANT: You MUST answer in {target_language}. Do NOT translate the text to "
    "English or any other language. Use similar words and maintain the original message. Only "
    "reply with the expanded text -- no explanations or notes!";

inline constexpr std::string_view kSummarise =
    "Your task is to SUMMARIZE the text below -- make it shorter while keeping the same meaning. "
    "DO NOT change the sentence type:\n"
    "- If input is a STATEMENT, output must be a STATEMENT\n"
    "- If input is a QUESTION, output must be a QUESTION (do NOT answer it!)\n"
    "\n"
    "Examples:\n"
    "- Statement 'I loved the movie' → 'Enjoyed the movie' (NOT 'Did you enjoy the movie?')\n"
    "- Question 'Where is my card?' → 'Card location?' (NOT 'Check your wallet')\n"
    "\n"
    "IMPORTANT: You MUST answer in {target_language}. Do NOT translate the text to English or any "
    "other language. Only output the summary, nothing else.\n"
    "\n"
    "Text to summarize:";

inline constexpr std::string_view kTranslate =
    "Translate the following text to {target_language}. Provide only the translation -- no "
    "explanations or notes!";

}  // namespace prompts

enum class LanguageRole { kSource, kSampledTarget, kSampledIntermediate };

enum class LanguagePolicy { kKeepSource, kBatchTarget, kPerTextTarget, kIntermediateThenSource };

struct PromptStep {
  std::string_view template_text;
  LanguageRole language_role;
};

struct TransformationSpec {
  TransformationId id;
  Axis axis;
  std::vector<PromptStep> steps;
  LanguagePolicy language_policy;
};

inline TransformationSpec spec_of(TransformationId id) {
  using L = LanguageRole;
  using P = LanguagePolicy;
  switch (id) {
    case TransformationId::kParaphrasing:
      return {id, axis_of(id), {{prompts::kParaphrasing, L::kSource}}, P::kKeepSource};
    case TransformationId::kBacktranslation:
      return {id, axis_of(id),
              {{prompts::kTranslate, L::kSampledIntermediate}, {prompts::kTranslate, L::kSource}},
              P::kIntermediateThenSource};
    case TransformationId::kStyleChange:
      return {id, axis_of(id), {{prompts::kStyleChange, L::kSource}}, P::kKeepSource};
    case TransformationId::kExpansion:
      return {id, axis_of(id), {{prompts::kExpansion, L::kSource}}, P::kKeepSource};
    case TransformationId::kSummarisation:
      return {id, axis_of(id), {{prompts::kSummarise, L::kSource}}, P::kKeepSource};
    case TransformationId::kSummarisedExpansion:
      return {id, axis_of(id),
              {{prompts::kExpansion, L::kSource}, {prompts::kSummarise, L::kSource}},
              P::kKeepSource};
    case TransformationId::kTranslation:
      return {id, axis_of(id), {{prompts::kTranslate, L::kSampledTarget}}, P::kBatchTarget};
    case TransformationId::kCrossTranslation:
      return {id, axis_of(id), {{prompts::kTranslate, L::kSampledTarget}}, P::kPerTextTarget};
  }
  throw Error(Errc::kInvalidArgument, "unknown transformation");
}

/// Substitutes every placeholder with the language's English name.
inline std::string render_prompt(std::string_view template_text, std::string_view language_name) {
  std::string out;
  std::size_t pos = 0;
  bool found = false;
  for (;;) {
    const auto hit = template_text.find(kPlaceholder, pos);
    if (hit == std::string_view::npos) break;
    found = true;
    out.append(template_text.substr(pos, hit - pos));
    out.append(language_name);
    pos = hit + kPlaceholder.size();
  }
  if (!found) throw Error(Errc::kMissingPlaceholder, "template has no {target_language}");
  out.append(template_text.substr(pos));
  return out;
}

inline std::string render_prompt(const PromptStep& step, const Language& language) {
  return render_prompt(step.template_text, language.name());
}

}  // namespace hteb::transform
