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

#include <set>
#include <string>
#include <vector>

#include "hteb/data/dataset.hpp"
#include "hteb/error.hpp"
#include "hteb/eval/classifier.hpp"
#include "hteb/eval/embedder.hpp"
#include "hteb/eval/kmeans.hpp"
#include "hteb/eval/metrics.hpp"
#include "hteb/score.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::eval {

inline std::vector<Vector> normalized_all(const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(normalized(v));
  return out;
}

/// Spearman between pair cosine similarities and gold scores (STS and STR).
inline double eval_sts(const std::vector<data::SentencePair>& pairs, Embedder& embedder) {
  if (pairs.size() < 3) throw Error(Errc::kTooFew, "STS needs at least 3 pairs");
  std::vector<std::string> a, b;
  std::vector<double> gold;
  for (const auto& p : pairs) {
    a.push_back(p.sentence1);
    b.push_back(p.sentence2);
    gold.push_back(p.score);
  }
  const auto ea = embedder.embed(a);
  const auto eb = embedder.embed(b);
  std::vector<double> sim;
  for (std::size_t i = 0; i < pairs.size(); ++i) sim.push_back(cosine_similarity(ea[i], eb[i]));
  return stats::spearman_rho(sim, gold);
}

/// Average precision of pair cosine similarity against 0/1 labels.
inline double eval_pair_classification(const std::vector<data::SentencePair>& pairs, Embedder& embedder) {
  std::vector<bool> labels;
  std::vector<std::string> a, b;
  bool pos = false, neg = false;
  for (const auto& p : pairs) {
    const bool l = p.score >= 0.5;
    labels.push_back(l);
    (l ? pos : neg) = true;
    a.push_back(p.sentence1);
    b.push_back(p.sentence2);
  }
  if (!pos || !neg) throw Error(Errc::kSingleClass, "pair classification needs both labels");
  const auto ea = embedder.embed(a);
  const auto eb = embedder.embed(b);
  std::vector<double> sim;
  for (std::size_t i = 0; i < pairs.size(); ++i) sim.push_back(cosine_similarity(ea[i], eb[i]));
  return average_precision(sim, labels);
}

/// Mean nDCG@k over queries; the corpus is ranked by cosine similarity.
inline double eval_retrieval(const std::vector<data::Document>& queries, const std::vector<data::Document>& corpus,
                             const std::map<std::string, std::map<std::string, double>>& qrels, Embedder& embedder,
                             std::size_t k = 10) {
  if (corpus.empty()) throw Error(Errc::kEmptyCorpus, "retrieval corpus is empty");
  if (queries.empty()) throw Error(Errc::kEmptyInput, "no retrieval queries");
  std::vector<std::string> doc_texts, query_texts;
  for (const auto& d : corpus) doc_texts.push_back(d.text);
  for (const auto& q : queries) query_texts.push_back(q.text);
  const auto docs = embedder.embed(doc_texts);
  const auto qs = embedder.embed(query_texts);
  double total = 0.0;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto it = qrels.find(queries[qi].id);
    if (it == qrels.end()) throw Error(Errc::kNoPositives, "query " + queries[qi].id + " has no qrels");
    std::vector<double> sim;
    sim.reserve(docs.size());
    for (const auto& d : docs) sim.push_back(cosine_similarity(qs[qi], d));
    std::vector<double> ranked;
    for (auto di : rank_descending(sim)) {
      if (ranked.size() == k) break;
      const auto g = it->second.find(corpus[di].id);
      ranked.push_back(g == it->second.end() ? 0.0 : g->second);
    }
    std::vector<double> all;
    for (const auto& [doc, grade] : it->second) all.push_back(grade);
    total += ndcg_at_k(ranked, all, k);
  }
  return total / static_cast<double>(queries.size());
}

/// Mean over queries of AP over cosine-ranked candidates (positives first in
/// input order, then negatives, for tie-breaking).
inline double eval_reranking(const std::vector<data::RerankQuery>& queries, Embedder& embedder) {
  if (queries.empty()) throw Error(Errc::kEmptyInput, "no reranking queries");
  std::vector<std::string> query_texts, cand_texts;
  for (const auto& q : queries) {
    if (q.positives.empty()) throw Error(Errc::kNoPositives, "query " + q.id + " has no positive candidate");
    if (q.negatives.empty()) throw Error(Errc::kDegenerate, "query " + q.id + " has no negative candidate");
    query_texts.push_back(q.query);
    cand_texts.insert(cand_texts.end(), q.positives.begin(), q.positives.end());
    cand_texts.insert(cand_texts.end(), q.negatives.begin(), q.negatives.end());
  }
  const auto qv = embedder.embed(query_texts);
  const auto cv = embedder.embed(cand_texts);
  double total = 0.0;
  std::size_t offset = 0;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto& q = queries[qi];
    const std::size_t n = q.positives.size() + q.negatives.size();
    std::vector<bool> labels(n, false);
    std::vector<double> sim;
    for (std::size_t c = 0; c < n; ++c) {
      labels[c] = c < q.positives.size();
      sim.push_back(cosine_similarity(qv[qi], cv[offset + c]));
    }
    offset += n;
    total += average_precision(sim, labels);
  }
  return total / static_cast<double>(queries.size());
}

/// Logistic regression on L2-normalised embeddings, accuracy on the test split.
inline double eval_classification(const std::vector<data::LabeledText>& train,
                                  const std::vector<data::LabeledText>& test, Embedder& embedder) {
  if (train.empty() || test.empty()) throw Error(Errc::kEmptyInput, "classification split is empty");
  std::set<std::string> known;
  std::vector<std::string> train_texts, train_labels, test_texts, test_labels;
  for (const auto& t : train) {
    known.insert(t.label);
    train_texts.push_back(t.text);
    train_labels.push_back(t.label);
  }
  for (const auto& t : test) {
    if (!known.count(t.label)) throw Error(Errc::kLabelMismatch, "test label '" + t.label + "' not in train");
    test_texts.push_back(t.text);
    test_labels.push_back(t.label);
  }
  LogisticRegression clf;
  clf.fit(normalized_all(embedder.embed(train_texts)), train_labels);
  std::vector<std::string> predicted;
  for (const auto& v : normalized_all(embedder.embed(test_texts))) predicted.push_back(clf.predict(v));
  return accuracy(test_labels, predicted);
}

/// k-means (k = number of gold classes) on L2-normalised embeddings, scored
/// by V-measure.
inline double eval_clustering(const std::vector<data::LabeledText>& texts, Embedder& embedder, std::uint64_t seed) {
  std::set<std::string> classes;
  std::vector<std::string> inputs, labels;
  for (const auto& t : texts) {
    classes.insert(t.label);
    inputs.push_back(t.text);
    labels.push_back(t.label);
  }
  if (classes.size() < 2) throw Error(Errc::kDegenerate, "clustering needs at least 2 classes");
  KMeansOptions opt;
  opt.seed = seed;
  const auto km = kmeans(normalized_all(embedder.embed(inputs)), classes.size(), opt);
  return v_measure(labels, km.assignment).v;
}

/// Per document: each machine summary scores its max cosine similarity to the
/// human summaries; Spearman against human relevance. Mean over documents
/// whose correlation is defined.
inline double eval_summarisation(const std::vector<data::SummaryDoc>& docs, Embedder& embedder) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& d : docs) {
    if (d.human_summaries.empty() || d.machine_summaries.size() < 2) {
      throw Error(Errc::kDegenerate, "document " + d.id + " lacks summaries");
    }
    std::vector<std::string> machine;
    std::vector<double> relevance;
    for (const auto& m : d.machine_summaries) {
      machine.push_back(m.text);
      relevance.push_back(m.relevance);
    }
    const auto hv = embedder.embed(d.human_summaries);
    const auto mv = embedder.embed(machine);
    std::vector<double> score;
    for (const auto& m : mv) {
      double best = -1.0;
      for (const auto& h : hv) best = std::max(best, cosine_similarity(m, h));
      score.push_back(best);
    }
    // Two machine summaries already give a defined rank correlation.
    try {
      total += stats::pearson(stats::average_ranks(score), stats::average_ranks(relevance));
      ++used;
    } catch (const Error& e) {
      if (e.code() != Errc::kDegenerate) throw;
    }
  }
  if (used == 0) throw Error(Errc::kDegenerate, "no document has a defined correlation");
  return total / static_cast<double>(used);
}

/// Scores one (model, dataset, condition, run) cell. Evaluator errors are
/// recorded on the cell instead of propagating.
inline ScoreCell evaluate(const data::EvalDataset& ds, const Condition& condition, std::int64_t run_seed,
                          Embedder& embedder) {
  ScoreCell cell;
  cell.model_id = embedder.model_id();
  cell.dataset_id = ds.id;
  cell.task = ds.task;
  cell.condition = condition;
  cell.run_seed = run_seed;
  cell.metric = std::string(metric_of(ds.task));
  try {
    switch (ds.task) {
      case TaskKind::kSTS:
      case TaskKind::kSTR: cell.value = eval_sts(ds.pairs, embedder); break;
      case TaskKind::kPairClassification: cell.value = eval_pair_classification(ds.pairs, embedder); break;
      case TaskKind::kRetrieval: cell.value = eval_retrieval(ds.queries, ds.corpus, ds.qrels, embedder); break;
      case TaskKind::kReranking: cell.value = eval_reranking(ds.rerank, embedder); break;
      case TaskKind::kClassification: cell.value = eval_classification(ds.train, ds.test, embedder); break;
      case TaskKind::kClustering:
        cell.value = eval_clustering(ds.texts, embedder, static_cast<std::uint64_t>(run_seed));
        break;
      case TaskKind::kSummarisation: cell.value = eval_summarisation(ds.summaries, embedder); break;
    }
  } catch (const std::exception& e) {
    cell.value.reset();
    cell.error = e.what();
  }
  return cell;
}

}  // namespace hteb::eval
