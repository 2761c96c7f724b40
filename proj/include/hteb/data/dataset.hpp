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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hteb/error.hpp"
#include "hteb/language.hpp"
#include "hteb/taxonomy.hpp"

namespace hteb::data {

using json = nlohmann::json;

struct LabeledText {
  std::string id;
  std::string text;
  std::string label;
  std::optional<Language> lang;
};

/// STS/STR pairs carry a gold score; PairClassification stores its 0/1 label
/// in `score`.
struct SentencePair {
  std::string id;
  std::string sentence1;
  std::string sentence2;
  double score = 0.0;
  std::optional<Language> lang;
};

struct RerankQuery {
  std::string id;
  std::string query;
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  std::optional<Language> lang;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<Language> lang;
};

struct MachineSummary {
  std::string text;
  double relevance = 0.0;
};

struct SummaryDoc {
  std::string id;
  std::vector<std::string> human_summaries;
  std::vector<MachineSummary> machine_summaries;
};

struct EvalDataset {
  std::string id;
  TaskKind task = TaskKind::kSTS;
  std::vector<Language> languages;
  std::map<std::string, std::string> splits;

  std::vector<LabeledText> train;  // Classification
  std::vector<LabeledText> test;   // Classification
  std::vector<LabeledText> texts;  // Clustering
  std::vector<SentencePair> pairs;  // STS, STR, PairClassification
  std::vector<RerankQuery> rerank;  // Reranking
  std::vector<Document> queries;    // Retrieval
  std::vector<Document> corpus;     // Retrieval
  std::map<std::string, std::map<std::string, double>> qrels;  // query -> doc -> grade
  std::vector<SummaryDoc> summaries;  // Summarisation

  Language primary_language() const {
    return languages.empty() ? Language::parse("eng") : languages.front();
  }
};

/// One transformable text: its field role, the index of its item within the
/// field's list, and the language it is written in.
struct TextSlot {
  std::string field;
  std::size_t item_index = 0;
  std::string item_id;
  std::string text;
  Language source;
};

using SlotKey = std::pair<std::string, std::size_t>;  // (field, item_index)
using TextOverrides = std::map<SlotKey, std::string>;

inline std::string indexed_field(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

/// Every text a transformation rewrites. Retrieval and Reranking expose only
/// their queries; documents and candidates are never transformed.
inline std::vector<TextSlot> text_slots(const EvalDataset& ds) {
  std::vector<TextSlot> out;
  const Language primary = ds.primary_language();
  auto lang_or = [&](const std::optional<Language>& l) { return l ? *l : primary; };
  switch (ds.task) {
    case TaskKind::kClassification:
      for (std::size_t i = 0; i < ds.train.size(); ++i) {
        out.push_back({"train_text", i, ds.train[i].id, ds.train[i].text, lang_or(ds.train[i].lang)});
      }
      for (std::size_t i = 0; i < ds.test.size(); ++i) {
        out.push_back({"test_text", i, ds.test[i].id, ds.test[i].text, lang_or(ds.test[i].lang)});
      }
      break;
    case TaskKind::kClustering:
      for (std::size_t i = 0; i < ds.texts.size(); ++i) {
        out.push_back({"text", i, ds.texts[i].id, ds.texts[i].text, lang_or(ds.texts[i].lang)});
      }
      break;
    case TaskKind::kSTS:
    case TaskKind::kSTR:
    case TaskKind::kPairClassification:
      for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        const auto& p = ds.pairs[i];
        out.push_back({"sentence1", i, p.id, p.sentence1, lang_or(p.lang)});
        out.push_back({"sentence2", i, p.id, p.sentence2, lang_or(p.lang)});
      }
      break;
    case TaskKind::kReranking:
      for (std::size_t i = 0; i < ds.rerank.size(); ++i) {
        out.push_back({"query", i, ds.rerank[i].id, ds.rerank[i].query, lang_or(ds.rerank[i].lang)});
      }
      break;
    case TaskKind::kRetrieval:
      for (std::size_t i = 0; i < ds.queries.size(); ++i) {
        out.push_back({"query", i, ds.queries[i].id, ds.queries[i].text, lang_or(ds.queries[i].lang)});
      }
      break;
    case TaskKind::kSummarisation:
      for (std::size_t i = 0; i < ds.summaries.size(); ++i) {
        const auto& d = ds.summaries[i];
        for (std::size_t h = 0; h < d.human_summaries.size(); ++h) {
          out.push_back({indexed_field("human_summary", h), i, d.id, d.human_summaries[h], primary});
        }
        for (std::size_t m = 0; m < d.machine_summaries.size(); ++m) {
          out.push_back({indexed_field("machine_summary", m), i, d.id, d.machine_summaries[m].text, primary});
        }
      }
      break;
  }
  return out;
}

/// Copy of `ds` with the overridden slots replaced. Labels, scores, ids and
/// relevance structure are untouched.
inline EvalDataset apply_overrides(const EvalDataset& ds, const TextOverrides& overrides) {
  EvalDataset out = ds;
  auto take = [&](std::string_view field, std::size_t i, std::string& target) {
    if (auto it = overrides.find({std::string(field), i}); it != overrides.end()) target = it->second;
  };
  for (std::size_t i = 0; i < out.train.size(); ++i) take("train_text", i, out.train[i].text);
  for (std::size_t i = 0; i < out.test.size(); ++i) take("test_text", i, out.test[i].text);
  for (std::size_t i = 0; i < out.texts.size(); ++i) take("text", i, out.texts[i].text);
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    take("sentence1", i, out.pairs[i].sentence1);
    take("sentence2", i, out.pairs[i].sentence2);
  }
  for (std::size_t i = 0; i < out.rerank.size(); ++i) take("query", i, out.rerank[i].query);
  for (std::size_t i = 0; i < out.queries.size(); ++i) take("query", i, out.queries[i].text);
  for (std::size_t i = 0; i < out.summaries.size(); ++i) {
    auto& d = out.summaries[i];
    for (std::size_t h = 0; h < d.human_summaries.size(); ++h) {
      take(indexed_field("human_summary", h), i, d.human_summaries[h]);
    }
    for (std::size_t m = 0; m < d.machine_summaries.size(); ++m) {
      take(indexed_field("machine_summary", m), i, d.machine_summaries[m].text);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

inline std::vector<json> read_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::kIo, "cannot read " + file.string());
  std::vector<json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(Errc::kIo, file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

namespace detail {

inline std::string id_of(const json& row, std::size_t index) {
  if (!row.contains("id")) return std::to_string(index);
  const auto& v = row["id"];
  return v.is_string() ? v.get<std::string>() : v.dump();
}

inline std::optional<Language> lang_of(const json& row) {
  if (!row.contains("lang") || row["lang"].is_null()) return std::nullopt;
  return Language::parse(row["lang"].get<std::string>());
}

inline std::string label_of(const json& row) {
  const auto& v = row.at("label");
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace detail

inline void validate(const EvalDataset& ds) {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::kInvalidArgument, "dataset " + ds.id + ": " + what);
  };
  switch (ds.task) {
    case TaskKind::kClassification: {
      if (ds.train.empty() || ds.test.empty()) fail("classification needs train and test rows");
      std::set<std::string> seen;
      for (const auto& r : ds.train) seen.insert(r.label);
      for (const auto& r : ds.test) {
        if (!seen.count(r.label)) {
          throw Error(Errc::kLabelMismatch, "dataset " + ds.id + ": test label '" + r.label + "' not in train");
        }
      }
      break;
    }
    case TaskKind::kClustering:
      if (ds.texts.empty()) fail("no clustering texts");
      break;
    case TaskKind::kSTS:
    case TaskKind::kSTR:
    case TaskKind::kPairClassification:
      if (ds.pairs.empty()) fail("no pairs");
      for (const auto& p : ds.pairs) {
        if (!std::isfinite(p.score)) fail("non-finite gold score in pair " + p.id);
      }
      break;
    case TaskKind::kReranking:
      if (ds.rerank.empty()) fail("no reranking queries");
      break;
    case TaskKind::kRetrieval: {
      if (ds.queries.empty()) fail("no queries");
      if (ds.corpus.empty()) throw Error(Errc::kEmptyCorpus, "dataset " + ds.id + ": empty corpus");
      std::set<std::string> docs, qids;
      for (const auto& d : ds.corpus) docs.insert(d.id);
      for (const auto& q : ds.queries) qids.insert(q.id);
      for (const auto& [qid, rels] : ds.qrels) {
        if (!qids.count(qid)) fail("qrels reference unknown query " + qid);
        for (const auto& [did, grade] : rels) {
          if (!docs.count(did)) fail("qrels reference unknown document " + did);
        }
      }
      break;
    }
    case TaskKind::kSummarisation:
      if (ds.summaries.empty()) fail("no summarisation documents");
      break;
  }
}

/// Loads a dataset from its JSON manifest:
///   {"id", "task", "languages": [...], "paths": {...}, "splits": {...}}
/// Payload paths are relative to the manifest. Keys under "paths" by task:
///   Classification: train, test    Clustering / STS / STR / PairClassification
///   / Reranking / Summarisation: data    Retrieval: queries, corpus, qrels
inline EvalDataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(Errc::kIo, "cannot read manifest " + manifest_path.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, manifest_path.string() + ": " + e.what());
  }
  const auto base = manifest_path.parent_path();
  EvalDataset ds;
  try {
    ds.id = m.at("id").get<std::string>();
    ds.task = parse_task(m.at("task").get<std::string>());
    if (m.contains("languages")) {
      ds.languages = parse_languages(m["languages"].get<std::vector<std::string>>());
    } else if (m.contains("language")) {
      ds.languages = {Language::parse(m["language"].get<std::string>())};
    }
    if (m.contains("splits")) {
      for (const auto& [k, v] : m["splits"].items()) ds.splits[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    const auto& paths = m.at("paths");
    auto path = [&](const char* key) { return base / paths.at(key).get<std::string>(); };

    auto labeled = [&](const std::filesystem::path& file) {
      std::vector<LabeledText> rows;
      const auto raw = read_jsonl(file);
      for (std::size_t i = 0; i < raw.size(); ++i) {
        rows.push_back({detail::id_of(raw[i], i), raw[i].at("text").get<std::string>(),
                        detail::label_of(raw[i]), detail::lang_of(raw[i])});
      }
      return rows;
    };

    switch (ds.task) {
      case TaskKind::kClassification:
        ds.train = labeled(path("train"));
        ds.test = labeled(path("test"));
        break;
      case TaskKind::kClustering:
        ds.texts = labeled(path("data"));
        break;
      case TaskKind::kSTS:
      case TaskKind::kSTR:
      case TaskKind::kPairClassification: {
        const auto raw = read_jsonl(path("data"));
        for (std::size_t i = 0; i < raw.size(); ++i) {
          const auto& r = raw[i];
          const double gold = r.contains("score") ? r["score"].get<double>() : r.at("label").get<double>();
          ds.pairs.push_back({detail::id_of(r, i), r.at("sentence1").get<std::string>(),
                              r.at("sentence2").get<std::string>(), gold, detail::lang_of(r)});
        }
        break;
      }
      case TaskKind::kReranking: {
        const auto raw = read_jsonl(path("data"));
        for (std::size_t i = 0; i < raw.size(); ++i) {
          const auto& r = raw[i];
          ds.rerank.push_back({detail::id_of(r, i), r.at("query").get<std::string>(),
                               r.at("positives").get<std::vector<std::string>>(),
                               r.at("negatives").get<std::vector<std::string>>(), detail::lang_of(r)});
        }
        break;
      }
      case TaskKind::kRetrieval: {
        const auto q = read_jsonl(path("queries"));
        for (std::size_t i = 0; i < q.size(); ++i) {
          ds.queries.push_back({detail::id_of(q[i], i), q[i].at("text").get<std::string>(), detail::lang_of(q[i])});
        }
        const auto c = read_jsonl(path("corpus"));
        for (std::size_t i = 0; i < c.size(); ++i) {
          std::string text = c[i].at("text").get<std::string>();
          if (c[i].contains("title") && !c[i]["title"].get<std::string>().empty()) {
            text = c[i]["title"].get<std::string>() + " " + text;
          }
          ds.corpus.push_back({detail::id_of(c[i], i), std::move(text), detail::lang_of(c[i])});
        }
        for (const auto& r : read_jsonl(path("qrels"))) {
          const auto qid = r.at("query_id").is_string() ? r["query_id"].get<std::string>() : r["query_id"].dump();
          const auto did = r.at("doc_id").is_string() ? r["doc_id"].get<std::string>() : r["doc_id"].dump();
          ds.qrels[qid][did] = r.value("relevance", 1.0);
        }
        break;
      }
      case TaskKind::kSummarisation: {
        const auto raw = read_jsonl(path("data"));
        for (std::size_t i = 0; i < raw.size(); ++i) {
          const auto& r = raw[i];
          SummaryDoc d{detail::id_of(r, i), r.at("human_summaries").get<std::vector<std::string>>(), {}};
          for (const auto& ms : r.at("machine_summaries")) {
            d.machine_summaries.push_back({ms.at("text").get<std::string>(), ms.at("relevance").get<double>()});
          }
          ds.summaries.push_back(std::move(d));
        }
        break;
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, manifest_path.string() + ": " + e.what());
  }
  validate(ds);
  return ds;
}

}  // namespace hteb::data
