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

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>
#include <string>
#include <utility>

#include "hteb/error.hpp"
#include "hteb/gateway/transport.hpp"

namespace hteb::gateway {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(Errc::kConfig, "endpoint URL lacks a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

inline std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

struct HttpSettings {
  std::string chat_url;
  std::string embed_url;
  std::string api_key;
  int timeout_seconds = 300;
};

/// HTEB_CHAT_URL / HTEB_EMBED_URL / HTEB_API_KEY take precedence over `base`.
inline HttpSettings settings_from_env(HttpSettings base) {
  base.chat_url = env_or("HTEB_CHAT_URL", base.chat_url);
  base.embed_url = env_or("HTEB_EMBED_URL", base.embed_url);
  base.api_key = env_or("HTEB_API_KEY", base.api_key);
  return base;
}

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpSettings settings) : settings_(std::move(settings)) {}

  json chat(const json& body) override { return post(settings_.chat_url, body); }
  json embeddings(const json& body) override { return post(settings_.embed_url, body); }

 private:
  json post(const std::string& url, const json& body) const {
    if (url.empty()) throw Error(Errc::kConfig, "no endpoint URL configured");
    const auto ep = split_url(url);
    httplib::Client client(ep.origin);
    client.set_connection_timeout(settings_.timeout_seconds, 0);
    client.set_read_timeout(settings_.timeout_seconds, 0);
    client.set_write_timeout(settings_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!settings_.api_key.empty()) headers.emplace("Authorization", "Bearer " + settings_.api_key);
    auto res = client.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(Errc::kTransport, url + ": " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(Errc::kTransport, url + ": HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw Error(Errc::kProtocol, url + ": response is not JSON (" + e.what() + ")");
    }
  }

  HttpSettings settings_;
};

}  // namespace hteb::gateway
