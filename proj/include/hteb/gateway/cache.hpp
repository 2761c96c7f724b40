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

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "hteb/error.hpp"
#include "hteb/hashing.hpp"

namespace hteb::gateway {

struct CacheRecord {
  std::string key;
  std::string output;
  int attempts = 0;
  std::string created_at;  // ISO 8601, UTC
};

/// Content hash identifying one generation step.
inline std::string transform_cache_key(std::string_view generator_id,
                                       std::string_view transformation_id, int step_index,
                                       std::string_view rendered_prompt,
                                       std::string_view input_text, std::int64_t run_seed) {
  const std::string step = std::to_string(step_index);
  const std::string seed = std::to_string(run_seed);
  return sha256_hex(
      join_key({generator_id, transformation_id, step, rendered_prompt, input_text, seed}));
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Append-only JSONL store, one file per (generator, transformation):
/// <root>/<generator>/<transformation>.jsonl. The last record for a key wins
/// when a file is reloaded. Concurrent requests for one key share a single
/// producer call.
class TransformCache {
 public:
  struct Produced {
    std::string output;
    int attempts = 1;
  };
  using Producer = std::function<Produced()>;

  explicit TransformCache(std::filesystem::path root) : root_(std::move(root)) {}

  CacheRecord get_or_put(const std::string& generator_id, const std::string& transformation_id,
                         const std::string& key, const Producer& producer) {
    Shard& shard = shard_for(generator_id, transformation_id);
    std::promise<CacheRecord> promise;
    std::shared_future<CacheRecord> pending;
    {
      std::lock_guard lock(shard.mu);
      if (auto it = shard.records.find(key); it != shard.records.end()) return it->second;
      if (auto it = shard.in_flight.find(key); it != shard.in_flight.end()) {
        pending = it->second;
      } else {
        shard.in_flight.emplace(key, promise.get_future().share());
      }
    }
    if (pending.valid()) return pending.get();

    try {
      Produced produced = producer();
      CacheRecord rec{key, std::move(produced.output), produced.attempts, utc_timestamp()};
      {
        std::lock_guard lock(shard.mu);
        append(shard, rec);
        shard.records[key] = rec;
        shard.in_flight.erase(key);
      }
      promise.set_value(rec);
      return rec;
    } catch (...) {
      {
        std::lock_guard lock(shard.mu);
        shard.in_flight.erase(key);
      }
      promise.set_exception(std::current_exception());
      throw;
    }
  }

  std::optional<CacheRecord> find(const std::string& generator_id,
                                  const std::string& transformation_id, const std::string& key) {
    Shard& shard = shard_for(generator_id, transformation_id);
    std::lock_guard lock(shard.mu);
    if (auto it = shard.records.find(key); it != shard.records.end()) return it->second;
    return std::nullopt;
  }

  const std::filesystem::path& root() const { return root_; }

 private:
  struct Shard {
    std::mutex mu;
    std::filesystem::path file;
    std::unordered_map<std::string, CacheRecord> records;
    std::unordered_map<std::string, std::shared_future<CacheRecord>> in_flight;
  };

  Shard& shard_for(const std::string& generator_id, const std::string& transformation_id) {
    std::lock_guard lock(mu_);
    auto& slot = shards_[{generator_id, transformation_id}];
    if (!slot) {
      slot = std::make_unique<Shard>();
      slot->file = root_ / sanitize(generator_id) / (sanitize(transformation_id) + ".jsonl");
      load(*slot);
    }
    return *slot;
  }

  static std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
      if (c == '/' || c == '\\' || c == ':') c = '_';
    }
    return out;
  }

  static void load(Shard& shard) {
    std::ifstream in(shard.file);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        CacheRecord rec{j.at("key").get<std::string>(), j.at("output").get<std::string>(),
                        j.value("attempts", 1), j.value("ts", std::string())};
        shard.records[rec.key] = std::move(rec);
      } catch (const nlohmann::json::exception&) {
        // A torn final line from an interrupted run is skipped.
        continue;
      }
    }
  }

  static void append(Shard& shard, const CacheRecord& rec) {
    std::error_code ec;
    std::filesystem::create_directories(shard.file.parent_path(), ec);
    if (ec) throw Error(Errc::kIo, "cannot create " + shard.file.parent_path().string());
    std::ofstream out(shard.file, std::ios::app);
    if (!out) throw Error(Errc::kIo, "cannot open " + shard.file.string());
    const nlohmann::json j = {
        {"key", rec.key}, {"output", rec.output}, {"attempts", rec.attempts}, {"ts", rec.created_at}};
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    out.flush();
    if (!out) throw Error(Errc::kIo, "cannot write " + shard.file.string());
  }

  std::filesystem::path root_;
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::unique_ptr<Shard>> shards_;
};

}  // namespace hteb::gateway
