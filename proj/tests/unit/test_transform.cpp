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

#include <map>
#include <set>

#include "hteb/data/dataset.hpp"
#include "hteb/gateway/mock_transport.hpp"
#include "hteb/language.hpp"
#include "hteb/transform/engine.hpp"
#include "hteb/transform/prompts.hpp"
#include "hteb/transform/sampling.hpp"

namespace hteb::transform {
namespace {

using gateway::Gateway;
using gateway::GatewayOptions;
using gateway::MockTransport;

Gateway mock_gateway(std::shared_ptr<MockTransport> mock = std::make_shared<MockTransport>()) {
  GatewayOptions o;
  o.retry.backoff_seconds = {0.0};
  o.parallelism = 2;
  return Gateway(mock, nullptr, o);
}

RunConfig config(std::int64_t seed = 1337) {
  RunConfig c;
  c.run_seed = seed;
  c.generator_id = "mock-gen";
  return c;
}

data::EvalDataset sts_dataset(std::size_t n) {
  data::EvalDataset ds;
  ds.id = "toy-sts";
  ds.task = TaskKind::kSTS;
  ds.languages = {Language::parse("English")};
  for (std::size_t i = 0; i < n; ++i) {
    ds.pairs.push_back({"p" + std::to_string(i), "A man is playing a guitar number " + std::to_string(i) + ".",
                        "The woman plays the piano in hall " + std::to_string(i) + ".",
                        static_cast<double>(i % 5), std::nullopt});
  }
  return ds;
}

TEST(Specs, StepCountsAndAxes) {
  std::map<Axis, int> per_axis;
  for (auto id : kAllTransformations) {
    const auto s = spec_of(id);
    const bool two = id == TransformationId::kBacktranslation || id == TransformationId::kSummarisedExpansion;
    EXPECT_EQ(s.steps.size(), two ? 2u : 1u) << name_of(id);
    ++per_axis[s.axis];
    for (const auto& step : s.steps) EXPECT_NE(step.template_text.find(kPlaceholder), std::string_view::npos);
  }
  EXPECT_EQ(axis_of(TransformationId::kParaphrasing), Axis::kLexicalStylistic);
  EXPECT_EQ(axis_of(TransformationId::kBacktranslation), Axis::kLexicalStylistic);
  EXPECT_EQ(axis_of(TransformationId::kStyleChange), Axis::kLexicalStylistic);
  EXPECT_EQ(axis_of(TransformationId::kExpansion), Axis::kLength);
  EXPECT_EQ(axis_of(TransformationId::kSummarisation), Axis::kLength);
  EXPECT_EQ(axis_of(TransformationId::kSummarisedExpansion), Axis::kLength);
  EXPECT_EQ(axis_of(TransformationId::kTranslation), Axis::kLanguage);
  EXPECT_EQ(axis_of(TransformationId::kCrossTranslation), Axis::kLanguage);
  // Eight transformations: three lexical/stylistic, three length, two language.
  EXPECT_EQ(per_axis[Axis::kLexicalStylistic], 3);
  EXPECT_EQ(per_axis[Axis::kLength], 3);
  EXPECT_EQ(per_axis[Axis::kLanguage], 2);
}

TEST(Prompts, RenderTranslationAndParaphrase) {
  const auto tr = render_prompt(spec_of(TransformationId::kTranslation).steps[0], Language::parse("French"));
  EXPECT_NE(tr.find("Translate the following text to French."), std::string::npos);
  EXPECT_EQ(tr, "Translate the following text to French. Provide only the translation -- no explanations or notes!");
  const auto pa = render_prompt(spec_of(TransformationId::kParaphrasing).steps[0], Language::parse("English"));
  EXPECT_NE(pa.find("You MUST answer in English"), std::string::npos);
}

TEST(Prompts, RenderChangesOnlyThePlaceholder) {
  const std::string_view tmpl = prompts::kSummarise;
  const auto out = render_prompt(tmpl, "German");
  std::string expected(tmpl);
  expected.replace(expected.find(kPlaceholder), kPlaceholder.size(), "German");
  EXPECT_EQ(out, expected);
}

TEST(Prompts, MissingPlaceholder) {
  try {
    render_prompt("Translate this.", "French");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingPlaceholder);
  }
}

TEST(Sampling, SourceExcluded) {
  const auto german = Language::parse("German");
  for (std::size_t i = 0; i < 200; ++i) {
    const auto l = sample_target_language(german, translation_pool(), SamplingScope::kPerText, 1337,
                                          {"ds", "CrossTranslation", i, "text"});
    EXPECT_FALSE(l.same_language(german));
  }
  const auto arabic_variant = Language::parse("ary");
  for (std::size_t i = 0; i < 100; ++i) {
    const auto l = sample_target_language(arabic_variant, translation_pool(), SamplingScope::kPerText, 7,
                                          {"ds", "CrossTranslation", i, "text"});
    EXPECT_NE(l.family(), "ara");
  }
}

TEST(Sampling, Deterministic) {
  const auto en = Language::parse("English");
  const DrawSite site{"ds", "CrossTranslation", 17, "sentence1"};
  EXPECT_EQ(sample_target_language(en, translation_pool(), SamplingScope::kPerText, 1338, site),
            sample_target_language(en, translation_pool(), SamplingScope::kPerText, 1338, site));
}

TEST(Sampling, PerBatchIgnoresItem) {
  const auto en = Language::parse("English");
  const auto first = sample_target_language(en, translation_pool(), SamplingScope::kPerBatch, 1337,
                                            {"ds", "Translation", 0, "sentence1"});
  for (std::size_t i = 1; i < 50; ++i) {
    EXPECT_EQ(sample_target_language(en, translation_pool(), SamplingScope::kPerBatch, 1337,
                                     {"ds", "Translation", i, i % 2 ? "sentence2" : "sentence1"}),
              first);
  }
}

TEST(Sampling, PerTextIsNearUniform) {
  const auto german = Language::parse("German");
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i < 1000; ++i) {
    counts[std::string(sample_target_language(german, translation_pool(), SamplingScope::kPerText, 1337,
                                              {"ds", "CrossTranslation", i, "text"})
                           .name())]++;
  }
  EXPECT_EQ(counts.size(), 4u);
  for (const auto& [name, c] : counts) EXPECT_NEAR(c / 1000.0, 0.25, 0.05) << name;
}

TEST(Sampling, EmptyPool) {
  try {
    sample_target_language(Language::parse("Spanish"), parse_languages({"Spanish"}), SamplingScope::kPerText,
                           1, {"ds", "t", 0, "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyPool);
  }
}

TEST(Sampling, SeedsGiveDifferentStreams) {
  const auto en = Language::parse("English");
  auto stream = [&](std::int64_t seed) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < 10; ++i) {
      s.emplace_back(sample_target_language(en, translation_pool(), SamplingScope::kPerText, seed,
                                            {"ds", "CrossTranslation", i, "text"})
                         .name());
    }
    return s;
  };
  EXPECT_NE(stream(1337), stream(1338));
  EXPECT_NE(stream(1338), stream(1339));
  EXPECT_NE(stream(1337), stream(1339));
}

TEST(Engine, BacktranslationChainsTwoSteps) {
  auto gw = mock_gateway();
  const auto rec = apply_transformation("A man is playing a guitar.", Language::parse("English"),
                                        spec_of(TransformationId::kBacktranslation), config(),
                                        {"ds", "Backtranslation", 0, "sentence1"}, gw);
  ASSERT_EQ(rec.step_outputs.size(), 2u);
  EXPECT_EQ(rec.final_text, rec.step_outputs[1]);
  ASSERT_EQ(rec.sampled_languages.size(), 2u);
  EXPECT_NE(rec.sampled_languages[0], "English");
  EXPECT_EQ(rec.sampled_languages[1], "English");
  const auto det = HeuristicLanguageIdentifier().detect(rec.final_text);
  ASSERT_TRUE(det.has_value());
  EXPECT_FALSE(contradicts(*det, Language::parse("English"), 0.5));
  EXPECT_FALSE(rec.failed());
}

TEST(Engine, SecondStepInputIsFirstStepOutput) {
  std::vector<std::string> inputs;
  std::mutex mu;
  auto t = std::make_shared<gateway::CallbackTransport>(
      [&](const gateway::json& body) {
        const auto content = body["messages"][0]["content"].get<std::string>();
        const auto input = content.substr(content.rfind("\n\n") + 2);
        {
          std::lock_guard lock(mu);
          inputs.push_back(input);
        }
        return gateway::json{{"choices", {{{"message", {{"content", "out<" + input + ">"}}}}}}};
      },
      [](const gateway::json&) { return gateway::json(); });
  Gateway gw(t, nullptr);
  const auto rec = apply_transformation("seed text", Language::parse("English"),
                                        spec_of(TransformationId::kBacktranslation), config(),
                                        {"ds", "Backtranslation", 0, "text"}, gw);
  ASSERT_EQ(inputs.size(), 2u);
  EXPECT_EQ(inputs[0], "seed text");
  EXPECT_EQ(inputs[1], rec.step_outputs[0]);
  EXPECT_EQ(rec.final_text, "out<out<seed text>>");
}

TEST(Engine, SummarisationShortensStatement) {
  auto gw = mock_gateway();
  const auto rec = apply_transformation("A man is playing a guitar.", Language::parse("English"),
                                        spec_of(TransformationId::kSummarisation), config(),
                                        {"ds", "Summarisation", 0, "sentence1"}, gw);
  EXPECT_LT(rec.final_text.size(), std::string("A man is playing a guitar.").size());
  EXPECT_EQ(rec.final_text.back(), '.');
}

TEST(Engine, CrossTranslationVariesWithinPairs) {
  auto gw = mock_gateway();
  const auto out = transform_dataset(sts_dataset(20), spec_of(TransformationId::kCrossTranslation), config(), gw);
  int differing = 0;
  for (std::size_t i = 0; i + 1 < out.records.size(); i += 2) {
    differing += out.records[i].sampled_languages[0] != out.records[i + 1].sampled_languages[0];
  }
  EXPECT_GT(differing, 0);
}

TEST(Engine, TranslationUsesOneLanguagePerBatch) {
  auto gw = mock_gateway();
  const auto out = transform_dataset(sts_dataset(12), spec_of(TransformationId::kTranslation), config(), gw);
  std::set<std::string> langs;
  for (const auto& r : out.records) langs.insert(r.sampled_languages[0]);
  EXPECT_EQ(langs.size(), 1u);
  EXPECT_EQ(langs.count("English"), 0u);
}

TEST(Engine, RetrievalTransformsOnlyQueries) {
  data::EvalDataset ds;
  ds.id = "toy-ret";
  ds.task = TaskKind::kRetrieval;
  ds.languages = {Language::parse("English")};
  for (int q = 0; q < 5; ++q) ds.queries.push_back({"q" + std::to_string(q), "what is topic " + std::to_string(q), {}});
  for (int d = 0; d < 100; ++d) ds.corpus.push_back({"d" + std::to_string(d), "document about topic " + std::to_string(d), {}});
  for (int q = 0; q < 5; ++q) ds.qrels["q" + std::to_string(q)]["d" + std::to_string(q)] = 1.0;
  auto gw = mock_gateway();
  const auto out = transform_dataset(ds, spec_of(TransformationId::kParaphrasing), config(), gw);
  EXPECT_EQ(out.records.size(), 5u);
  for (const auto& r : out.records) EXPECT_EQ(r.field_role, "query");
  const auto applied = data::apply_overrides(ds, out.overrides());
  for (std::size_t d = 0; d < ds.corpus.size(); ++d) EXPECT_EQ(applied.corpus[d].text, ds.corpus[d].text);
  EXPECT_EQ(applied.qrels, ds.qrels);
  EXPECT_NE(applied.queries[0].text, ds.queries[0].text);
}

TEST(Engine, ClassificationKeepsLabels) {
  data::EvalDataset ds;
  ds.id = "toy-cls";
  ds.task = TaskKind::kClassification;
  ds.languages = {Language::parse("English")};
  ds.train = {{"a", "good movie", "pos", {}}, {"b", "bad movie", "neg", {}}};
  ds.test = {{"c", "great film", "pos", {}}};
  auto gw = mock_gateway();
  const auto out = transform_dataset(ds, spec_of(TransformationId::kStyleChange), config(), gw);
  EXPECT_EQ(out.records.size(), 3u);
  const auto applied = data::apply_overrides(ds, out.overrides());
  ASSERT_EQ(applied.train.size(), 2u);
  EXPECT_EQ(applied.train[0].label, "pos");
  EXPECT_EQ(applied.train[1].id, "b");
  EXPECT_EQ(applied.test[0].label, "pos");
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NE(applied.train[i].text, ds.train[i].text);
}

TEST(Engine, TransportFailureIsRecordedNotThrown) {
  auto t = std::make_shared<gateway::CallbackTransport>(
      [](const gateway::json&) -> gateway::json { throw Error(Errc::kTransport, "offline"); },
      [](const gateway::json&) { return gateway::json(); });
  GatewayOptions o;
  o.retry.backoff_seconds = {0.0};
  Gateway gw(t, nullptr, o);
  const auto out = transform_dataset(sts_dataset(3), spec_of(TransformationId::kExpansion), config(), gw);
  EXPECT_EQ(out.failures(), 6u);
  EXPECT_EQ(out.records[0].step_outputs.size(), 1u);
}

TEST(Engine, DeterministicAcrossParallelism) {
  auto mock = std::make_shared<MockTransport>();
  GatewayOptions serial;
  serial.parallelism = 1;
  GatewayOptions wide;
  wide.parallelism = 4;
  Gateway a(mock, nullptr, serial), b(mock, nullptr, wide);
  const auto ds = sts_dataset(10);
  for (auto id : kAllTransformations) {
    const auto x = transform_dataset(ds, spec_of(id), config(1339), a);
    const auto y = transform_dataset(ds, spec_of(id), config(1339), b);
    ASSERT_EQ(x.records.size(), y.records.size());
    for (std::size_t i = 0; i < x.records.size(); ++i) {
      EXPECT_EQ(to_json(x.records[i]), to_json(y.records[i]));
    }
  }
}

}  // namespace
}  // namespace hteb::transform
