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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>

#include "hteb/eval/classifier.hpp"
#include "hteb/eval/embedder.hpp"
#include "hteb/eval/kmeans.hpp"
#include "hteb/eval/metrics.hpp"
#include "hteb/eval/tasks.hpp"
#include "hteb/gateway/mock_transport.hpp"
#include "oracles.hpp"

namespace hteb::eval {
namespace {

namespace fs = std::filesystem;

/// Looks vectors up in a table and records every text it was asked for.
class TableEmbedder : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, Vector> table, double scale = 1.0)
      : table_(std::move(table)), scale_(scale) {}
  const std::string& model_id() const override { return id_; }
  std::vector<Vector> embed(const std::vector<std::string>& texts) override {
    std::vector<Vector> out;
    for (const auto& t : texts) {
      seen.push_back(t);
      auto v = table_.at(t);
      for (auto& x : v) x *= scale_;
      out.push_back(v);
    }
    return out;
  }
  std::vector<std::string> seen;

 private:
  std::string id_ = "table";
  std::map<std::string, Vector> table_;
  double scale_;
};

Vector at_angle(double a) { return {std::cos(a), std::sin(a)}; }

TEST(Metrics, AveragePrecisionHandFixture) {
  EXPECT_NEAR(average_precision_ranked({true, false, true}), (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
  const std::vector<double> s{0.9, 0.5, 0.1};
  EXPECT_NEAR(average_precision(s, {true, true, false}), 1.0, 1e-12);
}

TEST(Metrics, AveragePrecisionTiesKeepInputOrder) {
  const std::vector<double> s{0.5, 0.5, 0.5};
  EXPECT_NEAR(average_precision(s, {false, true, false}), 0.5, 1e-12);
}

TEST(Metrics, AveragePrecisionMatchesOracle) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> coarse(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s;
    std::vector<bool> l;
    for (int i = 0; i < 12; ++i) {
      s.push_back(coarse(gen) / 6.0);  // coarse grid forces ties
      l.push_back(gen() % 3 == 0);
    }
    l[trial % 12] = true;
    EXPECT_NEAR(average_precision(s, l), oracle::average_precision(s, l), 1e-12);
  }
}

TEST(Metrics, AveragePrecisionRandomLabelsNearPositiveRate) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s;
  std::vector<bool> l;
  double pos = 0.0;
  for (int i = 0; i < 1000; ++i) {
    s.push_back(u(gen));
    l.push_back(u(gen) < 0.3);
    pos += l.back() ? 1.0 : 0.0;
  }
  EXPECT_NEAR(average_precision(s, l), pos / 1000.0, 0.05);
}

TEST(Metrics, NdcgHandFixtures) {
  EXPECT_NEAR(ndcg_at_k({0.0, 1.0, 0.0}, {1.0}), 1.0 / std::log2(3.0), 1e-12);
  EXPECT_NEAR(ndcg_at_k({0.0, 1.0, 0.0}, {1.0}), 0.6309297535714574, 1e-12);
  EXPECT_NEAR(ndcg_at_k({2.0, 1.0}, {1.0, 2.0}), 1.0, 1e-12);
  EXPECT_EQ(ndcg_at_k(std::vector<double>(10, 0.0), {1.0}), 0.0);
  EXPECT_THROW(ndcg_at_k({0.0}, {0.0}), Error);
}

TEST(Metrics, NdcgMatchesOracle) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> grade(0, 3), coarse(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s, g;
    for (int i = 0; i < 25; ++i) {
      s.push_back(coarse(gen));
      g.push_back(i % 4 == 0 ? grade(gen) : 0.0);
    }
    g[0] = 1.0;
    std::vector<double> ranked;
    for (auto i : rank_descending(s)) {
      if (ranked.size() == 10) break;
      ranked.push_back(g[i]);
    }
    EXPECT_NEAR(ndcg_at_k(ranked, g, 10), oracle::ndcg(s, g, 10), 1e-12);
  }
}

TEST(Metrics, VMeasureContingencyFixture) {
  // Oracle: scikit-learn v_measure_score (tests/fixtures/gen/eval_oracles.py).
  const std::vector<std::string> cls{"a", "a", "a", "a", "b", "b", "b", "c", "c", "c"};
  const std::vector<int> clu{0, 0, 0, 1, 1, 1, 1, 2, 2, 0};
  const auto v = v_measure(cls, clu);
  EXPECT_NEAR(v.v, 0.5961618204194684, 1e-9);
  EXPECT_NEAR(v.homogeneity, 0.5868600184765173, 1e-9);
  EXPECT_NEAR(v.completeness, 0.605763240710524, 1e-9);
}

TEST(Metrics, VMeasureEndpoints) {
  const std::vector<std::string> cls{"a", "a", "b", "b", "c"};
  EXPECT_NEAR(v_measure(cls, std::vector<int>{7, 7, 3, 3, 1}).v, 1.0, 1e-12);
  EXPECT_NEAR(v_measure(cls, std::vector<int>{0, 0, 0, 0, 0}).v, 0.0, 1e-12);
}

TEST(Metrics, Accuracy) {
  EXPECT_DOUBLE_EQ(accuracy({"a"}, {"a"}), 1.0);
  EXPECT_DOUBLE_EQ(accuracy({"a", "b", "a", "b"}, {"a", "a", "a", "a"}), 0.5);
}

TEST(Classifier, MatchesReferenceFit) {
  std::ifstream in(fs::path(HTEB_FIXTURE_DIR) / "logreg_oracle.json");
  const auto f = nlohmann::json::parse(in);
  const auto x = f.at("x").get<std::vector<Vector>>();
  const auto y = f.at("y").get<std::vector<std::string>>();
  LogisticRegression clf;
  clf.fit(x, y);
  std::vector<std::string> pred;
  for (const auto& t : f.at("test").get<std::vector<Vector>>()) pred.push_back(clf.predict(t));
  EXPECT_EQ(pred, f.at("predicted").get<std::vector<std::string>>());
  std::vector<std::string> train_pred;
  for (const auto& r : x) train_pred.push_back(clf.predict(r));
  EXPECT_NEAR(accuracy(y, train_pred), f.at("train_accuracy").get<double>(), 1e-12);
}

TEST(Classifier, SeparableToyIsPerfect) {
  std::vector<Vector> x{{1.0, 0.1}, {0.9, -0.2}, {1.2, 0.0}, {-1.0, 0.2}, {-0.8, -0.1}, {-1.1, 0.0}};
  std::vector<std::string> y{"p", "p", "p", "n", "n", "n"};
  LogisticRegression clf;
  clf.fit(x, y);
  std::vector<std::string> pred;
  for (const auto& r : x) pred.push_back(clf.predict(r));
  EXPECT_DOUBLE_EQ(accuracy(y, pred), 1.0);
}

TEST(Classifier, SingleClassRejected) {
  LogisticRegression clf;
  EXPECT_THROW(clf.fit({{1.0}, {2.0}}, {"a", "a"}), Error);
}

TEST(Classifier, LbfgsSolvesQuadratic) {
  const auto r = minimize_lbfgs(
      [](const std::vector<double>& x, std::vector<double>& g) {
        g = {2.0 * (x[0] - 3.0), 20.0 * (x[1] + 1.0)};
        return (x[0] - 3.0) * (x[0] - 3.0) + 10.0 * (x[1] + 1.0) * (x[1] + 1.0);
      },
      {0.0, 0.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 3.0, 1e-4);
  EXPECT_NEAR(r.x[1], -1.0, 1e-4);
}

TEST(KMeans, SeparatedBlobsRecovered) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<Vector> x;
  std::vector<std::string> labels;
  const std::vector<Vector> centers{{0, 0}, {3, 0}, {0, 3}};
  for (int i = 0; i < 60; ++i) {
    const auto& c = centers[i % 3];
    x.push_back({c[0] + noise(gen), c[1] + noise(gen)});
    labels.push_back(std::to_string(i % 3));
  }
  const auto km = kmeans(x, 3);
  EXPECT_NEAR(v_measure(labels, km.assignment).v, 1.0, 1e-12);
}

TEST(KMeans, DeterministicForSeed) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> x;
  for (int i = 0; i < 50; ++i) x.push_back({u(gen), u(gen)});
  KMeansOptions o;
  o.seed = 42;
  EXPECT_EQ(kmeans(x, 4, o).assignment, kmeans(x, 4, o).assignment);
}

TEST(Tasks, StsFixture) {
  // Oracle: scipy spearmanr on cos(angle) vs gold.
  const std::vector<double> ang{0.1, 0.5, 0.9, 1.3, 0.3};
  const std::vector<double> gold{4.5, 3.0, 1.0, 2.0, 4.0};
  std::map<std::string, Vector> table{{"s1", at_angle(0.0)}};
  std::vector<data::SentencePair> pairs;
  for (std::size_t i = 0; i < ang.size(); ++i) {
    table["t" + std::to_string(i)] = at_angle(ang[i]);
    pairs.push_back({std::to_string(i), "s1", "t" + std::to_string(i), gold[i], std::nullopt});
  }
  TableEmbedder e(table);
  EXPECT_NEAR(eval_sts(pairs, e), 0.9, 1e-9);
  for (auto& p : pairs) p.score = std::cos(ang[std::stoul(p.id)]);
  EXPECT_NEAR(eval_sts(pairs, e), 1.0, 1e-12);
  for (auto& p : pairs) p.score = -p.score;
  EXPECT_NEAR(eval_sts(pairs, e), -1.0, 1e-12);
}

TEST(Tasks, PairClassificationSingleClass) {
  TableEmbedder e({{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  std::vector<data::SentencePair> pairs{{"0", "a", "b", 1.0, std::nullopt}, {"1", "a", "a", 1.0, std::nullopt}};
  try {
    eval_pair_classification(pairs, e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::kSingleClass);
  }
}

TEST(Tasks, RetrievalRankTwo) {
  TableEmbedder e({{"q", at_angle(0.0)}, {"d0", at_angle(0.1)}, {"d1", at_angle(0.2)}, {"d2", at_angle(1.0)}});
  std::vector<data::Document> queries{{"q", "q", std::nullopt}};
  std::vector<data::Document> corpus{{"d0", "d0", std::nullopt}, {"d1", "d1", std::nullopt}, {"d2", "d2", std::nullopt}};
  EXPECT_NEAR(eval_retrieval(queries, corpus, {{"q", {{"d1", 1.0}}}}, e), 0.6309297535714574, 1e-12);
  EXPECT_NEAR(eval_retrieval(queries, corpus, {{"q", {{"d0", 1.0}}}}, e), 1.0, 1e-12);
  EXPECT_THROW(eval_retrieval(queries, {}, {{"q", {{"d0", 1.0}}}}, e), Error);
}

TEST(Tasks, RerankingMeanOfQueries) {
  TableEmbedder e({{"q1", at_angle(0.0)},
                   {"q2", at_angle(0.0)},
                   {"p", at_angle(0.1)},
                   {"n", at_angle(0.5)},
                   {"p2", at_angle(0.9)},
                   {"n2", at_angle(0.2)}});
  std::vector<data::RerankQuery> qs{{"1", "q1", {"p"}, {"n"}, std::nullopt}, {"2", "q2", {"p2"}, {"n2"}, std::nullopt}};
  EXPECT_NEAR(eval_reranking(qs, e), 0.75, 1e-12);
}

TEST(Tasks, RerankingMatchesOracleOnTenQueries) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  std::map<std::string, Vector> table;
  std::vector<data::RerankQuery> qs;
  double oracle_sum = 0.0;
  for (int q = 0; q < 10; ++q) {
    data::RerankQuery rq;
    rq.id = std::to_string(q);
    rq.query = "q" + rq.id;
    table[rq.query] = at_angle(0.0);
    std::vector<double> sims;
    std::vector<bool> labels;
    for (int c = 0; c < 8; ++c) {
      const std::string t = "c" + rq.id + "_" + std::to_string(c);
      const double a = u(gen);
      table[t] = at_angle(a);
      const bool pos = c < 2 + q % 3;
      (pos ? rq.positives : rq.negatives).push_back(t);
      sims.push_back(std::cos(a));
      labels.push_back(pos);
    }
    oracle_sum += oracle::average_precision(sims, labels);
    qs.push_back(rq);
  }
  TableEmbedder e(table);
  EXPECT_NEAR(eval_reranking(qs, e), oracle_sum / 10.0, 1e-12);
}

TEST(Tasks, ClassificationShuffledLabelsNearChance) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::map<std::string, Vector> table;
  std::vector<data::LabeledText> train, test;
  for (int i = 0; i < 400; ++i) {
    const std::string t = "x" + std::to_string(i);
    Vector v(8);
    for (auto& c : v) c = n01(gen);
    table[t] = v;
    data::LabeledText item{t, t, (gen() & 1) ? "a" : "b", std::nullopt};
    (i < 200 ? train : test).push_back(item);
  }
  TableEmbedder e(table);
  EXPECT_NEAR(eval_classification(train, test, e), 0.5, 0.07);
}

TEST(Tasks, ClassificationSingleItemAndLabelMismatch) {
  TableEmbedder e({{"a1", {1.0, 0.0}}, {"a2", {0.9, 0.1}}, {"b1", {0.0, 1.0}}, {"b2", {0.1, 0.9}}});
  std::vector<data::LabeledText> train{{"1", "a1", "A", {}}, {"2", "b1", "B", {}}, {"3", "b2", "B", {}}};
  EXPECT_DOUBLE_EQ(eval_classification(train, {{"4", "a2", "A", {}}}, e), 1.0);
  try {
    eval_classification(train, {{"4", "a2", "C", {}}}, e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::kLabelMismatch);
  }
}

TEST(Tasks, SummarisationThreeDocs) {
  // Oracle: scipy spearmanr per document, then the mean (0.5, 0.2, 1.0).
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> docs{
      {{0.2, 0.4, 0.6}, {5, 3, 4}}, {{0.1, 0.7, 0.3, 0.9}, {4, 2, 1, 3}}, {{0.5, 0.2}, {1, 2}}};
  std::map<std::string, Vector> table{{"h", at_angle(0.0)}, {"far", at_angle(3.0)}};
  std::vector<data::SummaryDoc> sd;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    data::SummaryDoc doc{std::to_string(d), {"h", "far"}, {}};
    for (std::size_t m = 0; m < docs[d].first.size(); ++m) {
      const auto t = "m" + std::to_string(d) + "_" + std::to_string(m);
      table[t] = at_angle(docs[d].first[m]);
      doc.machine_summaries.push_back({t, docs[d].second[m]});
    }
    sd.push_back(doc);
  }
  TableEmbedder e(table);
  EXPECT_NEAR(eval_summarisation(sd, e), 0.5666666666666665, 1e-9);
}

TEST(Tasks, MetricsInvariantUnderScaling) {
  std::map<std::string, Vector> table;
  std::vector<data::SentencePair> pairs;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    table["a" + std::to_string(i)] = {u(gen), u(gen), u(gen)};
    table["b" + std::to_string(i)] = {u(gen), u(gen), u(gen)};
    pairs.push_back({std::to_string(i), "a" + std::to_string(i), "b" + std::to_string(i), double(i % 2), {}});
  }
  TableEmbedder e1(table), e3(table, 3.0);
  EXPECT_DOUBLE_EQ(eval_pair_classification(pairs, e1), eval_pair_classification(pairs, e3));
  std::vector<data::LabeledText> train, test;
  for (int i = 0; i < 30; ++i) {
    data::LabeledText t{std::to_string(i), "a" + std::to_string(i), i % 3 == 0 ? "x" : "y", {}};
    (i < 20 ? train : test).push_back(t);
  }
  EXPECT_DOUBLE_EQ(eval_classification(train, test, e1), eval_classification(train, test, e3));
  EXPECT_DOUBLE_EQ(eval_clustering(train, e1, 7), eval_clustering(train, e3, 7));
}

TEST(Evaluate, DispatchAndContainment) {
  data::EvalDataset ds;
  ds.id = "sts";
  ds.task = TaskKind::kSTS;
  ds.pairs = {{"0", "a", "b", 1.0, {}}, {"1", "a", "c", 2.0, {}}, {"2", "b", "c", 3.0, {}}};
  TableEmbedder e({{"a", {1.0, 0.0}}, {"b", {0.6, 0.8}}, {"c", {0.0, 1.0}}});
  const auto cell = evaluate(ds, std::nullopt, 1337, e);
  EXPECT_TRUE(cell.ok());
  EXPECT_EQ(cell.metric, "spearman");
  ds.pairs[0].sentence1 = "missing";
  const auto bad = evaluate(ds, TransformationId::kParaphrasing, 1337, e);
  EXPECT_FALSE(bad.ok());
  EXPECT_FALSE(bad.error.empty());
}

TEST(Evaluate, RetrievalTransformChangesOnlyQueries) {
  data::EvalDataset ds;
  ds.id = "ret";
  ds.task = TaskKind::kRetrieval;
  ds.queries = {{"q", "where is the cat", {}}};
  ds.corpus = {{"d0", "the cat is on the mat", {}}, {"d1", "dogs bark", {}}};
  ds.qrels = {{"q", {{"d0", 1.0}}}};
  auto mock = std::make_shared<gateway::MockTransport>();
  gateway::Gateway gw(mock, nullptr, {});
  GatewayEmbedder e(gw, "lexical");
  const auto original = evaluate(ds, std::nullopt, 1, e);
  const int calls = mock->embed_calls();
  const auto transformed = data::apply_overrides(ds, {{{"query", 0}, "donde esta el gato"}});
  EXPECT_EQ(transformed.corpus[0].text, ds.corpus[0].text);
  const auto cell = evaluate(transformed, TransformationId::kTranslation, 1, e);
  EXPECT_TRUE(original.ok());
  EXPECT_TRUE(cell.ok());
  EXPECT_EQ(mock->embed_calls(), calls + 1);  // corpus served from memo; one call for the new query
}

TEST(Embedder, DiskStoreAvoidsTransport) {
  const auto dir = fs::temp_directory_path() / ("hteb_embed_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  auto store = std::make_shared<EmbeddingStore>(dir);
  auto mock = std::make_shared<gateway::MockTransport>();
  gateway::Gateway gw(mock, nullptr, {});
  GatewayEmbedder first(gw, "lexical", std::nullopt, store);
  const auto v1 = first.embed({"alpha", "beta", "alpha"});
  EXPECT_EQ(mock->embed_calls(), 1);
  auto reloaded = std::make_shared<EmbeddingStore>(dir);
  GatewayEmbedder second(gw, "lexical", std::nullopt, reloaded);
  const auto v2 = second.embed({"beta", "alpha"});
  EXPECT_EQ(mock->embed_calls(), 1);
  EXPECT_EQ(v2[0], v1[1]);
  EXPECT_EQ(v2[1], v1[0]);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace hteb::eval
