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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hteb/error.hpp"

namespace hteb {

enum class TransformationId {
  kParaphrasing,
  kBacktranslation,
  kStyleChange,
  kExpansion,
  kSummarisation,
  kSummarisedExpansion,
  kTranslation,
  kCrossTranslation,
};

enum class Axis { kLexicalStylistic, kLength, kLanguage };

inline constexpr std::array<TransformationId, 8> kAllTransformations{
    TransformationId::kParaphrasing,  TransformationId::kBacktranslation,
    TransformationId::kStyleChange,   TransformationId::kExpansion,
    TransformationId::kSummarisation, TransformationId::kSummarisedExpansion,
    TransformationId::kTranslation,   TransformationId::kCrossTranslation,
};

inline constexpr std::array<Axis, 3> kAllAxes{Axis::kLexicalStylistic, Axis::kLength,
                                              Axis::kLanguage};

inline constexpr Axis axis_of(TransformationId id) {
  switch (id) {
    case TransformationId::kParaphrasing:
    case TransformationId::kBacktranslation:
    case TransformationId::kStyleChange:
      return Axis::kLexicalStylistic;
    case TransformationId::kExpansion:
    case TransformationId::kSummarisation:
    case TransformationId::kSummarisedExpansion:
      return Axis::kLength;
    case TransformationId::kTranslation:
    case TransformationId::kCrossTranslation:
      return Axis::kLanguage;
  }
  return Axis::kLanguage;
}

inline constexpr std::string_view name_of(TransformationId id) {
  switch (id) {
    case TransformationId::kParaphrasing: return "Paraphrasing";
    case TransformationId::kBacktranslation: return "Backtranslation";
    case TransformationId::kStyleChange: return "StyleChange";
    case TransformationId::kExpansion: return "Expansion";
    case TransformationId::kSummarisation: return "Summarisation";
    case TransformationId::kSummarisedExpansion: return "SummarisedExpansion";
    case TransformationId::kTranslation: return "Translation";
    case TransformationId::kCrossTranslation: return "CrossTranslation";
  }
  return "";
}

inline constexpr std::string_view name_of(Axis axis) {
  switch (axis) {
    case Axis::kLexicalStylistic: return "LexicalStylistic";
    case Axis::kLength: return "Length";
    case Axis::kLanguage: return "Language";
  }
  return "";
}

inline std::optional<TransformationId> try_parse_transformation(std::string_view s) {
  for (auto id : kAllTransformations) {
    if (name_of(id) == s) return id;
  }
  return std::nullopt;
}

inline TransformationId parse_transformation(std::string_view s) {
  if (auto id = try_parse_transformation(s)) return *id;
  throw Error(Errc::kInvalidArgument, "unknown transformation '" + std::string(s) + "'");
}

inline Axis parse_axis(std::string_view s) {
  for (auto a : kAllAxes) {
    if (name_of(a) == s) return a;
  }
  throw Error(Errc::kInvalidArgument, "unknown axis '" + std::string(s) + "'");
}

enum class TaskKind {
  kClassification,
  kClustering,
  kPairClassification,
  kReranking,
  kRetrieval,
  kSTS,
  kSTR,
  kSummarisation,
};

inline constexpr std::array<TaskKind, 8> kAllTasks{
    TaskKind::kClassification, TaskKind::kClustering, TaskKind::kPairClassification,
    TaskKind::kReranking,      TaskKind::kRetrieval,  TaskKind::kSTS,
    TaskKind::kSTR,            TaskKind::kSummarisation,
};

inline constexpr std::string_view name_of(TaskKind task) {
  switch (task) {
    case TaskKind::kClassification: return "Classification";
    case TaskKind::kClustering: return "Clustering";
    case TaskKind::kPairClassification: return "PairClassification";
    case TaskKind::kReranking: return "Reranking";
    case TaskKind::kRetrieval: return "Retrieval";
    case TaskKind::kSTS: return "STS";
    case TaskKind::kSTR: return "STR";
    case TaskKind::kSummarisation: return "Summarisation";
  }
  return "";
}

inline TaskKind parse_task(std::string_view s) {
  for (auto t : kAllTasks) {
    if (name_of(t) == s) return t;
  }
  throw Error(Errc::kInvalidArgument, "unknown task '" + std::string(s) + "'");
}

/// Main metric per task.
inline constexpr std::string_view metric_of(TaskKind task) {
  switch (task) {
    case TaskKind::kClassification: return "accuracy";
    case TaskKind::kClustering: return "v_measure";
    case TaskKind::kPairClassification: return "ap";
    case TaskKind::kReranking: return "map";
    case TaskKind::kRetrieval: return "ndcg_at_10";
    case TaskKind::kSTS:
    case TaskKind::kSTR:
    case TaskKind::kSummarisation:
      return "spearman";
  }
  return "";
}

/// Evaluation condition: std::nullopt is the untransformed original.
using Condition = std::optional<TransformationId>;

inline std::string condition_name(const Condition& c) {
  return c ? std::string(name_of(*c)) : std::string("Original");
}

inline Condition parse_condition(std::string_view s) {
  if (s == "Original") return std::nullopt;
  return parse_transformation(s);
}

}  // namespace hteb
