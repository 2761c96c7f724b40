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
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/gateway/cache.hpp"
#include "hteb/gateway/transport.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::gateway {

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<double> backoff_seconds{0.5, 1.0, 2.0};

  double delay_after(int attempt) const {
    if (backoff_seconds.empty()) return 0.0;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(attempt - 1), backoff_seconds.size() - 1);
    return backoff_seconds[i];
  }
};

/// Runs fn(0..n-1) on at most `parallelism` threads. The first exception is
/// rethrown after all workers finish.
inline void parallel_for(std::size_t n, std::size_t parallelism,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(n, std::max<std::size_t>(1, parallelism));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Results are placed by input index, so output order never depends on
/// scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t n, std::size_t parallelism,
                            const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  parallel_for(n, parallelism, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

inline std::string trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  std::size_t b = 0, e = s.size();
  while (b < e && ws(s[b])) ++b;
  while (e > b && ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

/// Strips one surrounding Markdown code fence and outer whitespace. Anything
/// else, reasoning envelopes included, is left as generated.
inline std::string strip_framing(std::string_view raw) {
  std::string s = trim(raw);
  if (s.rfind("```", 0) == 0) {
    const auto eol = s.find('\n');
    s = eol == std::string::npos ? s.substr(3) : s.substr(eol + 1);
    if (s.size() >= 3 && s.compare(s.size() - 3, 3, "```") == 0) s.resize(s.size() - 3);
    s = trim(s);
  } else if (s.size() >= 3 && s.compare(s.size() - 3, 3, "```") == 0) {
    s = trim(std::string_view(s).substr(0, s.size() - 3));
  }
  return s;
}

inline std::string parse_chat_response(const json& response) {
  try {
    const auto& content = response.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::kProtocol, std::string("malformed chat response: ") + e.what());
  }
}

inline std::vector<Vector> parse_embedding_response(const json& response, std::size_t expected) {
  std::vector<Vector> out;
  try {
    const auto& data = response.at("data");
    std::vector<std::pair<std::size_t, Vector>> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data.at(i);
      rows.emplace_back(item.value("index", i), item.at("embedding").get<Vector>());
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& r : rows) out.push_back(std::move(r.second));
  } catch (const json::exception& e) {
    throw Error(Errc::kProtocol, std::string("malformed embeddings response: ") + e.what());
  }
  if (out.size() != expected) {
    throw Error(Errc::kDimensionMismatch, "expected " + std::to_string(expected) + " vectors, got " +
                                              std::to_string(out.size()));
  }
  for (const auto& v : out) {
    if (v.size() != out.front().size()) throw Error(Errc::kDimensionMismatch, "ragged embedding vectors");
  }
  return out;
}

struct GatewayOptions {
  RetryPolicy retry;
  std::size_t parallelism = 4;
  std::size_t embed_batch_size = 64;
};

/// Where a chat result is cached; absent for uncached calls (judging).
struct CacheSlot {
  std::string generator_id;
  std::string transformation_id;
  std::string key;
};

struct ChatResult {
  std::string output;
  int attempts = 0;
  bool from_cache = false;
};

/// Thread-safe front door to the chat and embedding endpoints.
class Gateway {
 public:
  Gateway(std::shared_ptr<Transport> transport, std::shared_ptr<TransformCache> cache,
          GatewayOptions options = {})
      : transport_(std::move(transport)), cache_(std::move(cache)), options_(std::move(options)) {}

  ChatResult chat_complete(const ChatRequest& req, const CacheSlot* slot = nullptr) {
    if (req.input_text.empty()) throw Error(Errc::kEmptyInput, "chat input text is empty");
    if (slot == nullptr || !cache_) {
      auto produced = call_with_retry(req);
      return {std::move(produced.output), produced.attempts, false};
    }
    bool produced_here = false;
    const auto rec = cache_->get_or_put(slot->generator_id, slot->transformation_id, slot->key, [&] {
      produced_here = true;
      return call_with_retry(req);
    });
    return {rec.output, rec.attempts, !produced_here};
  }

  std::vector<Vector> embed(const EmbeddingRequest& req) {
    if (req.texts.empty()) throw Error(Errc::kEmptyInput, "no texts to embed");
    const std::size_t batch = std::max<std::size_t>(1, options_.embed_batch_size);
    const std::size_t n_batches = (req.texts.size() + batch - 1) / batch;
    auto parts = parallel_map<std::vector<Vector>>(n_batches, options_.parallelism, [&](std::size_t b) {
      EmbeddingRequest sub{req.model_id, {}, req.instruction};
      const auto first = req.texts.begin() + static_cast<std::ptrdiff_t>(b * batch);
      const auto last = req.texts.begin() +
                        static_cast<std::ptrdiff_t>(std::min(req.texts.size(), (b + 1) * batch));
      sub.texts.assign(first, last);
      return with_transport_retry(
          [&] { return parse_embedding_response(transport_->embeddings(embedding_body(sub)), sub.texts.size()); });
    });
    std::vector<Vector> out;
    out.reserve(req.texts.size());
    for (auto& p : parts) {
      for (auto& v : p) out.push_back(std::move(v));
    }
    for (const auto& v : out) {
      if (v.size() != out.front().size()) throw Error(Errc::kDimensionMismatch, "ragged embedding vectors");
    }
    return out;
  }

  std::size_t parallelism() const { return options_.parallelism; }
  const GatewayOptions& options() const { return options_; }

 private:
  TransformCache::Produced call_with_retry(const ChatRequest& req) {
    const json body = chat_body(req);
    const int limit = std::max(1, options_.retry.max_attempts);
    std::string output;
    for (int attempt = 1; attempt <= limit; ++attempt) {
      try {
        output = strip_framing(parse_chat_response(transport_->chat(body)));
      } catch (const Error& e) {
        if (e.code() != Errc::kTransport || attempt == limit) throw;
        pause(attempt);
        continue;
      }
      if (!output.empty() || attempt == limit) return {output, attempt};
      pause(attempt);
    }
    return {output, limit};
  }

  template <typename F>
  std::invoke_result_t<F> with_transport_retry(F&& f) {
    const int limit = std::max(1, options_.retry.max_attempts);
    for (int attempt = 1;; ++attempt) {
      try {
        return f();
      } catch (const Error& e) {
        if (e.code() != Errc::kTransport || attempt >= limit) throw;
        pause(attempt);
      }
    }
  }

  void pause(int attempt) const {
    const double s = options_.retry.delay_after(attempt);
    if (s > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
  }

  std::shared_ptr<Transport> transport_;
  std::shared_ptr<TransformCache> cache_;
  GatewayOptions options_;
};

}  // namespace hteb::gateway
