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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hteb/cli/toml_lite.hpp"
#include "hteb/error.hpp"
#include "hteb/qc/judge.hpp"
#include "hteb/report/inference.hpp"
#include "hteb/stats/split_half.hpp"
#include "hteb/taxonomy.hpp"
#include "hteb/transform/engine.hpp"

namespace hteb::cli {

struct Endpoints {
  std::string chat;
  std::string embeddings;
  std::string api_key_env = "HTEB_API_KEY";
  int timeout_seconds = 300;
};

/// Benchmark configuration. Relative paths resolve against the config file's
/// directory.
struct BenchmarkConfig {
  std::filesystem::path base_dir;
  std::string generator_id;
  std::vector<std::string> embedding_models;
  std::map<std::string, std::string> instructions;  // model -> embedding instruction
  std::vector<std::filesystem::path> datasets;       // manifest paths
  std::vector<std::int64_t> run_seeds{std::begin(transform::kDefaultRunSeeds),
                                      std::end(transform::kDefaultRunSeeds)};
  std::vector<TransformationId> transformations{kAllTransformations.begin(), kAllTransformations.end()};
  Endpoints endpoints;
  std::optional<std::filesystem::path> mock_dir;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path output_dir = "out";
  std::size_t parallelism = 4;
  int max_attempts = 3;

  // select-model
  std::vector<std::string> candidates;
  std::optional<std::filesystem::path> probe_dataset;
  std::size_t probe_limit = 0;  // 0 = every text
  std::size_t shortlist_size = 5;
  std::size_t judge_resamples = qc::kJudgeBootstrapResamples;

  // statistics
  std::size_t min_datasets = report::kDefaultMinDatasets;
  std::size_t splits = stats::kDefaultSplits;
  std::uint64_t seed = 1337;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : base_dir / p;
  }
  std::filesystem::path out_dir() const { return resolve(output_dir); }
  /// A relative cache dir lives under the output dir.
  std::filesystem::path cache_path() const { return cache_dir.is_absolute() ? cache_dir : out_dir() / cache_dir; }
  std::filesystem::path transformed_dir() const { return out_dir() / "transformed"; }
  std::filesystem::path scores_file() const { return out_dir() / "scores.csv"; }
  std::filesystem::path report_dir() const { return out_dir() / "report"; }
  std::filesystem::path select_dir() const { return out_dir() / "select"; }

  /// Checks the invariants: seeds non-empty and distinct, manifests exist.
  void validate() const {
    if (run_seeds.empty()) throw Error(Errc::kConfig, "run_seeds is empty");
    if (std::set<std::int64_t>(run_seeds.begin(), run_seeds.end()).size() != run_seeds.size()) {
      throw Error(Errc::kConfig, "run_seeds must be distinct");
    }
    if (transformations.empty()) throw Error(Errc::kConfig, "no transformations selected");
    if (std::set<TransformationId>(transformations.begin(), transformations.end()).size() != transformations.size()) {
      throw Error(Errc::kConfig, "duplicate transformation");
    }
    for (const auto& d : datasets) {
      if (!std::filesystem::exists(resolve(d))) throw Error(Errc::kConfig, "manifest not found: " + resolve(d).string());
    }
    if (probe_dataset && !std::filesystem::exists(resolve(*probe_dataset))) {
      throw Error(Errc::kConfig, "probe dataset not found: " + resolve(*probe_dataset).string());
    }
    if (parallelism == 0) throw Error(Errc::kConfig, "parallelism must be at least 1");
    if (max_attempts < 1) throw Error(Errc::kConfig, "max_attempts must be at least 1");
  }
};

namespace detail {

inline const nlohmann::json* find(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

template <class T>
T get(const nlohmann::json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::kConfig, std::string("bad type for '") + key + "'");
  }
}

template <class T>
std::size_t non_negative(const nlohmann::json& v, const char* key) {
  const auto x = get<std::int64_t>(v, key);
  if (x < 0) throw Error(Errc::kConfig, std::string("'") + key + "' must not be negative");
  return static_cast<std::size_t>(x);
}

}  // namespace detail

inline BenchmarkConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known{
      "generator",     "embedding_models", "instructions", "datasets",       "run_seeds",   "transformations",
      "endpoints",     "mock",             "cache_dir",    "output_dir",     "parallelism", "max_attempts",
      "candidates",    "probe_dataset",    "probe_limit",  "shortlist_size", "judge_resamples",
      "min_datasets",  "splits",           "seed"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw Error(Errc::kConfig, "unknown config key '" + k + "'");
  }
  BenchmarkConfig c;
  c.base_dir = base_dir;
  using detail::find;
  using detail::get;
  if (auto v = find(j, "generator")) c.generator_id = get<std::string>(*v, "generator");
  if (auto v = find(j, "embedding_models")) c.embedding_models = get<std::vector<std::string>>(*v, "embedding_models");
  if (auto v = find(j, "instructions")) c.instructions = get<std::map<std::string, std::string>>(*v, "instructions");
  if (auto v = find(j, "datasets")) {
    for (const auto& p : get<std::vector<std::string>>(*v, "datasets")) c.datasets.emplace_back(p);
  }
  if (auto v = find(j, "run_seeds")) c.run_seeds = get<std::vector<std::int64_t>>(*v, "run_seeds");
  if (auto v = find(j, "transformations")) {
    c.transformations.clear();
    for (const auto& name : get<std::vector<std::string>>(*v, "transformations")) {
      const auto t = try_parse_transformation(name);
      if (!t) throw Error(Errc::kConfig, "unknown transformation '" + name + "'");
      c.transformations.push_back(*t);
    }
  }
  if (auto v = find(j, "endpoints")) {
    if (auto e = find(*v, "chat")) c.endpoints.chat = get<std::string>(*e, "endpoints.chat");
    if (auto e = find(*v, "embeddings")) c.endpoints.embeddings = get<std::string>(*e, "endpoints.embeddings");
    if (auto e = find(*v, "api_key_env")) c.endpoints.api_key_env = get<std::string>(*e, "endpoints.api_key_env");
    if (auto e = find(*v, "timeout_seconds")) c.endpoints.timeout_seconds = get<int>(*e, "endpoints.timeout_seconds");
  }
  if (auto v = find(j, "mock")) c.mock_dir = get<std::string>(*v, "mock");
  if (auto v = find(j, "cache_dir")) c.cache_dir = get<std::string>(*v, "cache_dir");
  if (auto v = find(j, "output_dir")) c.output_dir = get<std::string>(*v, "output_dir");
  if (auto v = find(j, "parallelism")) c.parallelism = detail::non_negative<std::size_t>(*v, "parallelism");
  if (auto v = find(j, "max_attempts")) c.max_attempts = get<int>(*v, "max_attempts");
  if (auto v = find(j, "candidates")) c.candidates = get<std::vector<std::string>>(*v, "candidates");
  if (auto v = find(j, "probe_dataset")) c.probe_dataset = get<std::string>(*v, "probe_dataset");
  if (auto v = find(j, "probe_limit")) c.probe_limit = detail::non_negative<std::size_t>(*v, "probe_limit");
  if (auto v = find(j, "shortlist_size")) c.shortlist_size = detail::non_negative<std::size_t>(*v, "shortlist_size");
  if (auto v = find(j, "judge_resamples")) c.judge_resamples = detail::non_negative<std::size_t>(*v, "judge_resamples");
  if (auto v = find(j, "min_datasets")) c.min_datasets = detail::non_negative<std::size_t>(*v, "min_datasets");
  if (auto v = find(j, "splits")) c.splits = detail::non_negative<std::size_t>(*v, "splits");
  if (auto v = find(j, "seed")) c.seed = detail::non_negative<std::uint64_t>(*v, "seed");
  return c;
}

inline BenchmarkConfig load_config(const std::filesystem::path& path) {
  const auto j = TomlReader::parse_file(path);
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace hteb::cli
