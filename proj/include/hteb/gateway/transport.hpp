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

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hteb::gateway {

using json = nlohmann::json;

inline constexpr int kDefaultMaxOutputTokens = 2048;

struct ChatRequest {
  std::string model_id;
  std::string prompt;  // rendered transformation instruction
  std::string input_text;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_output_tokens = kDefaultMaxOutputTokens;
  std::optional<std::int64_t> seed;
  std::string request_tag;
};

struct EmbeddingRequest {
  std::string model_id;
  std::vector<std::string> texts;
  std::optional<std::string> instruction;  // prefixed to every text
};

/// Chat is sent as a single user turn: instruction, blank line, input.
inline std::string chat_message_content(const ChatRequest& req) {
  return req.prompt + "\n\n" + req.input_text;
}

/// OpenAI-compatible chat-completions body.
inline json chat_body(const ChatRequest& req) {
  json body = {
      {"model", req.model_id},
      {"messages", json::array({{{"role", "user"}, {"content", chat_message_content(req)}}})},
      {"temperature", req.temperature},
      {"top_p", req.top_p},
      {"max_tokens", req.max_output_tokens},
  };
  if (req.seed) body["seed"] = *req.seed;
  return body;
}

/// OpenAI-compatible embeddings body.
inline json embedding_body(const EmbeddingRequest& req) {
  json input = json::array();
  for (const auto& t : req.texts) input.push_back(req.instruction ? *req.instruction + t : t);
  return {{"model", req.model_id}, {"input", std::move(input)}};
}

/// Wire-level transport. Implementations throw Error(kTransport) for network
/// or HTTP failures and return the decoded response body otherwise.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual json chat(const json& body) = 0;
  virtual json embeddings(const json& body) = 0;
};

/// Transport backed by plain callables; handy for tests and adapters.
class CallbackTransport : public Transport {
 public:
  using Fn = std::function<json(const json&)>;
  CallbackTransport(Fn chat, Fn embeddings) : chat_(std::move(chat)), embed_(std::move(embeddings)) {}

  json chat(const json& body) override {
    ++chat_calls_;
    return chat_(body);
  }
  json embeddings(const json& body) override {
    ++embed_calls_;
    return embed_(body);
  }

  int chat_calls() const { return chat_calls_.load(); }
  int embed_calls() const { return embed_calls_.load(); }

 private:
  Fn chat_;
  Fn embed_;
  std::atomic<int> chat_calls_{0};
  std::atomic<int> embed_calls_{0};
};

}  // namespace hteb::gateway
