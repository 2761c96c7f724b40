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

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/gateway/gateway.hpp"
#include "hteb/hashing.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::eval {

/// Embeds texts for one fixed model.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual const std::string& model_id() const = 0;
  virtual std::vector<Vector> embed(const std::vector<std::string>& texts) = 0;
};

/// Append-only JSONL of vectors per model: <root>/<model>.jsonl with records
/// {key, vector}. Keys hash (model, instruction, text).
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::filesystem::path root) : root_(std::move(root)) {}

  static std::string key_of(std::string_view model, std::string_view instruction, std::string_view text) {
    return sha256_hex(join_key({"embedding", model, instruction, text}));
  }

  std::optional<Vector> find(const std::string& model, const std::string& key) {
    std::lock_guard lock(mu_);
    auto& shard = shard_for(model);
    if (auto it = shard.find(key); it != shard.end()) return it->second;
    return std::nullopt;
  }

  void put(const std::string& model, const std::vector<std::pair<std::string, Vector>>& records) {
    std::lock_guard lock(mu_);
    auto& shard = shard_for(model);
    const auto file = file_of(model);
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::app);
    if (!out) throw Error(Errc::kIo, "cannot open " + file.string());
    for (const auto& [key, v] : records) {
      out << nlohmann::json{{"key", key}, {"vector", v}}.dump() << '\n';
      shard[key] = v;
    }
    out.flush();
    if (!out) throw Error(Errc::kIo, "cannot write " + file.string());
  }

 private:
  using Shard = std::unordered_map<std::string, Vector>;

  std::filesystem::path file_of(const std::string& model) const {
    std::string name = model;
    for (char& c : name) {
      if (c == '/' || c == '\\' || c == ':') c = '_';
    }
    return root_ / (name + ".jsonl");
  }

  Shard& shard_for(const std::string& model) {
    auto [it, inserted] = shards_.try_emplace(model);
    if (inserted) {
      std::ifstream in(file_of(model));
      for (std::string line; in && std::getline(in, line);) {
        if (line.empty()) continue;
        try {
          const auto j = nlohmann::json::parse(line);
          it->second[j.at("key").get<std::string>()] = j.at("vector").get<Vector>();
        } catch (const nlohmann::json::exception&) {
          continue;  // torn line from an interrupted run
        }
      }
    }
    return it->second;
  }

  std::filesystem::path root_;
  std::mutex mu_;
  std::unordered_map<std::string, Shard> shards_;
};

/// Embeds through the gateway. Texts are deduplicated and memoised in memory
/// and, when a store is given, on disk; only unseen texts reach the transport.
class GatewayEmbedder : public Embedder {
 public:
  GatewayEmbedder(gateway::Gateway& gw, std::string model_id, std::optional<std::string> instruction = std::nullopt,
                  std::shared_ptr<EmbeddingStore> store = nullptr)
      : gw_(gw), model_(std::move(model_id)), instruction_(std::move(instruction)), store_(std::move(store)) {}

  const std::string& model_id() const override { return model_; }

  std::vector<Vector> embed(const std::vector<std::string>& texts) override {
    std::vector<std::string> missing;
    {
      std::lock_guard lock(mu_);
      std::unordered_map<std::string, bool> queued;
      for (const auto& t : texts) {
        if (memo_.count(t) || queued.count(t)) continue;
        if (store_) {
          if (auto v = store_->find(model_, key_of(t))) {
            memo_[t] = std::move(*v);
            continue;
          }
        }
        queued[t] = true;
        missing.push_back(t);
      }
    }
    if (!missing.empty()) {
      const auto vectors = gw_.embed({model_, missing, instruction_});
      std::vector<std::pair<std::string, Vector>> records;
      std::lock_guard lock(mu_);
      for (std::size_t i = 0; i < missing.size(); ++i) {
        memo_[missing[i]] = vectors[i];
        if (store_) records.emplace_back(key_of(missing[i]), vectors[i]);
      }
      if (store_) store_->put(model_, records);
    }
    std::vector<Vector> out;
    out.reserve(texts.size());
    std::lock_guard lock(mu_);
    for (const auto& t : texts) out.push_back(memo_.at(t));
    return out;
  }

 private:
  std::string key_of(const std::string& text) const {
    return EmbeddingStore::key_of(model_, instruction_.value_or(""), text);
  }

  gateway::Gateway& gw_;
  std::string model_;
  std::optional<std::string> instruction_;
  std::shared_ptr<EmbeddingStore> store_;
  std::mutex mu_;
  std::unordered_map<std::string, Vector> memo_;
};

}  // namespace hteb::eval
