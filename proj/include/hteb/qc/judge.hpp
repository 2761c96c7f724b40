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
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/gateway/cache.hpp"
#include "hteb/gateway/gateway.hpp"
#include "hteb/stats/bootstrap.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/stats/holm.hpp"
#include "hteb/taxonomy.hpp"

namespace hteb::qc {

inline constexpr std::string_view kJudgeInstruction =
    "You are evaluating the quality of a text transformation. The named transformation was applied "
    "to the original text below. Judge how well the transformed text carries out that "
    "transformation while preserving the meaning of the original, on a scale from 1 (very poor) "
    "to 5 (excellent). Give a short justification, then end with a final line of the form "
    "'Score: N' where N is an integer from 1 to 5.";

inline std::string judge_input(std::string_view transformation, std::string_view original,
                               std::string_view transformed) {
  return "Transformation: " + std::string(transformation) + "\n\nOriginal text:\n" + std::string(original) +
         "\n\nTransformed text:\n" + std::string(transformed);
}

/// Last standalone integer in [1, 5]. Digits that belong to a larger number,
/// a decimal, or a denominator ("4/5") are skipped.
inline std::optional<int> try_parse_judge_score(std::string_view response) {
  std::optional<int> found;
  const auto digit = [&](std::size_t i) {
    return i < response.size() && std::isdigit(static_cast<unsigned char>(response[i])) != 0;
  };
  for (std::size_t i = 0; i < response.size();) {
    if (!digit(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (digit(j)) ++j;
    const bool after_slash = i > 0 && response[i - 1] == '/';
    const bool after_decimal = i > 1 && response[i - 1] == '.' && digit(i - 2);
    const bool glued_before = i > 0 && std::isalpha(static_cast<unsigned char>(response[i - 1])) != 0;
    const bool decimal_after = j + 1 < response.size() && response[j] == '.' && digit(j + 1);
    const bool glued_after = j < response.size() && std::isalpha(static_cast<unsigned char>(response[j])) != 0;
    if (j - i == 1 && !after_slash && !after_decimal && !glued_before && !decimal_after && !glued_after) {
      const int v = response[i] - '0';
      if (v >= 1 && v <= 5) found = v;
    }
    i = j;
  }
  return found;
}

inline int parse_judge_score(std::string_view response) {
  if (auto v = try_parse_judge_score(response)) return *v;
  throw Error(Errc::kUnparseableScore, "no score in [1, 5] in judge response");
}

/// One judged unit: a source text under one transformation, with the
/// output of every generator.
struct JudgeSample {
  std::string sample_id;  // groups transformations of the same source text
  TransformationId transformation;
  std::string original;
  std::map<std::string, std::string> outputs;  // generator -> output
};

struct JudgeCell {
  std::string judge;
  std::string generator;
  double mean_score = 0.0;
  std::size_t n = 0;
};

struct JudgeMatrix {
  std::vector<std::string> generators;
  std::vector<std::string> judges;
  std::vector<JudgeCell> cells;  // judge-major
  std::size_t unparseable = 0;
  /// generator -> sample_id -> mean over judges and transformations.
  std::map<std::string, std::map<std::string, double>> per_sample;

  const JudgeCell& cell(const std::string& judge, const std::string& generator) const {
    for (const auto& c : cells) {
      if (c.judge == judge && c.generator == generator) return c;
    }
    throw Error(Errc::kInvalidArgument, "no cell for " + judge + " x " + generator);
  }

  /// Column average: mean over judges of the cell means.
  double column_mean(const std::string& generator) const {
    std::vector<double> v;
    for (const auto& c : cells) {
      if (c.generator == generator && c.n > 0) v.push_back(c.mean_score);
    }
    return stats::mean(v);
  }
};

/// Assembles a matrix from already-parsed scores (judge, generator, sample, score).
struct ParsedScore {
  std::string judge;
  std::string generator;
  std::string sample_id;
  int score = 0;
};

inline JudgeMatrix build_judge_matrix(const std::vector<std::string>& generators,
                                      const std::vector<std::string>& judges,
                                      const std::vector<ParsedScore>& scores, std::size_t unparseable = 0) {
  JudgeMatrix m{generators, judges, {}, unparseable, {}};
  std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sums;
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> sample_sums;
  for (const auto& s : scores) {
    if (s.score < 1 || s.score > 5) throw Error(Errc::kOutOfRange, "judge score outside 1..5");
    auto& cell = sums[{s.judge, s.generator}];
    cell.first += s.score;
    ++cell.second;
    auto& ps = sample_sums[s.generator][s.sample_id];
    ps.first += s.score;
    ++ps.second;
  }
  for (const auto& j : judges) {
    for (const auto& g : generators) {
      const auto it = sums.find({j, g});
      JudgeCell c{j, g, 0.0, 0};
      if (it != sums.end()) c = {j, g, it->second.first / static_cast<double>(it->second.second), it->second.second};
      m.cells.push_back(c);
    }
  }
  for (const auto& [g, samples] : sample_sums) {
    for (const auto& [id, sum] : samples) m.per_sample[g][id] = sum.first / static_cast<double>(sum.second);
  }
  return m;
}

/// Every judge scores every generator's output on every sample (the judge's
/// own outputs included). Judge calls are cached like transformation steps.
inline JudgeMatrix judge_crossover(const std::vector<std::string>& generators,
                                   const std::vector<std::string>& judges,
                                   const std::vector<JudgeSample>& samples, gateway::Gateway& gw,
                                   std::string_view instruction = kJudgeInstruction) {
  struct Job {
    std::size_t judge, generator, sample;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (const auto& g : generators) {
      if (!samples[s].outputs.count(g)) {
        throw Error(Errc::kInvalidArgument, "sample " + samples[s].sample_id + " lacks output of " + g);
      }
    }
    for (std::size_t j = 0; j < judges.size(); ++j) {
      for (std::size_t g = 0; g < generators.size(); ++g) jobs.push_back({j, g, s});
    }
  }
  const auto responses = gateway::parallel_map<std::optional<int>>(jobs.size(), gw.parallelism(), [&](std::size_t k) {
    const auto& job = jobs[k];
    const auto& sample = samples[job.sample];
    gateway::ChatRequest req;
    req.model_id = judges[job.judge];
    req.prompt = std::string(instruction);
    const auto& output = sample.outputs.at(generators[job.generator]);
    req.input_text = judge_input(name_of(sample.transformation), sample.original, output);
    const gateway::CacheSlot slot{judges[job.judge], "Judge",
                                  gateway::transform_cache_key(judges[job.judge], "Judge", 0, req.prompt,
                                                               req.input_text, 0)};
    return try_parse_judge_score(gw.chat_complete(req, &slot).output);
  });
  std::vector<ParsedScore> parsed;
  std::size_t unparseable = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (!responses[k]) {
      ++unparseable;
      continue;
    }
    parsed.push_back({judges[jobs[k].judge], generators[jobs[k].generator], samples[jobs[k].sample].sample_id,
                      *responses[k]});
  }
  return build_judge_matrix(generators, judges, parsed, unparseable);
}

/// Generator comparisons default to more resamples than the general
/// bootstrap: with ten pairs at a 1/B floor, Holm-corrected p-values stay at or
/// above 10/B.
inline constexpr std::size_t kJudgeBootstrapResamples = 20000;

struct GeneratorSummary {
  std::string generator;
  double mean = 0.0;  // column average
  stats::Interval ci;
};

struct PairwiseComparison {
  std::string a;
  std::string b;
  double mean_difference = 0.0;
  double p_raw = 1.0;
  double p_holm = 1.0;
};

struct JudgeComparison {
  std::vector<GeneratorSummary> generators;  // sorted by mean, best first
  std::vector<PairwiseComparison> pairs;
  std::string winner;
};

/// Bootstrap CIs per generator over per-sample means, paired bootstrap tests
/// for every pair of generators, Holm-corrected jointly.
inline JudgeComparison compare_generators(const JudgeMatrix& m,
                                          std::size_t resamples = kJudgeBootstrapResamples,
                                          std::uint64_t seed = 1337) {
  JudgeComparison out;
  for (const auto& g : m.generators) {
    std::vector<double> v;
    if (auto it = m.per_sample.find(g); it != m.per_sample.end()) {
      for (const auto& [id, x] : it->second) v.push_back(x);
    }
    GeneratorSummary s{g, m.column_mean(g), {}};
    s.ci = v.size() >= 2 ? stats::percentile_bootstrap_ci(v, resamples, 0.95, seed) : stats::Interval{s.mean, s.mean};
    out.generators.push_back(s);
  }
  std::vector<double> raw;
  for (std::size_t i = 0; i < m.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < m.generators.size(); ++j) {
      const auto& ga = m.per_sample.at(m.generators[i]);
      const auto& gb = m.per_sample.at(m.generators[j]);
      std::vector<double> a, b;
      for (const auto& [id, x] : ga) {
        if (auto it = gb.find(id); it != gb.end()) {
          a.push_back(x);
          b.push_back(it->second);
        }
      }
      PairwiseComparison c{m.generators[i], m.generators[j], 0.0, 1.0, 1.0};
      if (a.size() >= 2) {
        for (std::size_t k = 0; k < a.size(); ++k) c.mean_difference += (a[k] - b[k]) / static_cast<double>(a.size());
        c.p_raw = stats::paired_bootstrap_p(a, b, resamples, seed);
      }
      raw.push_back(c.p_raw);
      out.pairs.push_back(c);
    }
  }
  const auto adjusted = stats::holm_correct(raw);
  for (std::size_t k = 0; k < out.pairs.size(); ++k) out.pairs[k].p_holm = adjusted[k];
  std::stable_sort(out.generators.begin(), out.generators.end(),
                   [](const auto& x, const auto& y) { return x.mean > y.mean; });
  if (!out.generators.empty()) out.winner = out.generators.front().generator;
  return out;
}

/// The `k` generators with the lowest total error rate, ties kept in input order.
inline std::vector<std::string> shortlist(const std::vector<std::pair<std::string, double>>& total_error_rates,
                                          std::size_t k) {
  auto sorted = total_error_rates;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, sorted.size()); ++i) out.push_back(sorted[i].first);
  return out;
}

}  // namespace hteb::qc
