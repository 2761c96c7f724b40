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

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <string_view>

#include "hteb/error.hpp"

namespace hteb::cli {

/// Reader for the TOML subset the config uses: comments, bare or quoted
/// keys, dotted [table] headers, basic and literal strings, integers, floats,
/// booleans and (possibly multi-line) arrays of those. Inline tables,
/// dates and multi-line strings are rejected.
class TomlReader {
 public:
  static nlohmann::json parse(std::string_view text, std::string source = "<toml>") {
    TomlReader r(text, std::move(source));
    return r.document();
  }

  static nlohmann::json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::kConfig, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
  }

 private:
  TomlReader(std::string_view text, std::string source) : s_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::kConfig, source_ + ":" + std::to_string(line_) + ": " + what);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char take() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_blank() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) take();
  }

  /// Skips whitespace, newlines and comments.
  void skip_all() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) take();
      if (peek() == '#') {
        while (!eof() && peek() != '\n') take();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_blank();
    if (peek() == '#') {
      while (!eof() && peek() != '\n') take();
    }
    if (peek() == '\r') take();
    if (!eof() && take() != '\n') fail("expected end of line");
  }

  static bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string key_part() {
    skip_blank();
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    std::string k;
    while (!eof() && bare_char(peek())) k += take();
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts{key_part()};
    skip_blank();
    while (peek() == '.') {
      take();
      parts.push_back(key_part());
      skip_blank();
    }
    return parts;
  }

  std::string basic_string() {
    take();  // opening quote
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = take();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      c = take();
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'u': {
          if (pos_ + 4 > s_.size()) fail("bad \\u escape");
          const auto cp = std::stoul(std::string(s_.substr(pos_, 4)), nullptr, 16);
          pos_ += 4;
          append_utf8(out, static_cast<char32_t>(cp));
          break;
        }
        default: fail(std::string("unknown escape \\") + c);
      }
    }
  }

  static void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string literal_string() {
    take();
    std::string out;
    while (!eof() && peek() != '\'' && peek() != '\n') out += take();
    if (peek() != '\'') fail("unterminated literal string");
    take();
    return out;
  }

  nlohmann::json value() {
    skip_blank();
    const char c = peek();
    if (c == '"') {
      if (s_.substr(pos_, 3) == "\"\"\"") fail("multi-line strings are not supported");
      return basic_string();
    }
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') fail("inline tables are not supported");
    std::string tok;
    while (!eof() && (bare_char(peek()) || peek() == '.' || peek() == '+')) tok += take();
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.empty()) fail("expected a value");
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    try {
      std::size_t used = 0;
      if (digits.find_first_of(".eE") == std::string::npos) {
        const auto v = std::stoll(digits, &used);
        if (used == digits.size()) return v;
      } else {
        const auto v = std::stod(digits, &used);
        if (used == digits.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("bad value '" + tok + "'");
  }

  nlohmann::json array() {
    take();
    nlohmann::json out = nlohmann::json::array();
    for (;;) {
      skip_all();
      if (peek() == ']') {
        take();
        return out;
      }
      out.push_back(value());
      skip_all();
      if (peek() == ',') {
        take();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  nlohmann::json document() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    for (;;) {
      skip_all();
      if (eof()) return root;
      if (peek() == '[') {
        take();
        if (peek() == '[') fail("arrays of tables are not supported");
        const auto path = dotted_key();
        if (peek() != ']') fail("expected ']'");
        take();
        table = &root;
        for (const auto& p : path) {
          auto& next = (*table)[p];
          if (next.is_null()) next = nlohmann::json::object();
          if (!next.is_object()) fail("'" + p + "' is not a table");
          table = &next;
        }
        end_of_line();
        continue;
      }
      const auto path = dotted_key();
      if (peek() != '=') fail("expected '='");
      take();
      auto v = value();
      nlohmann::json* target = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto& next = (*target)[path[i]];
        if (next.is_null()) next = nlohmann::json::object();
        target = &next;
      }
      if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
      (*target)[path.back()] = std::move(v);
      end_of_line();
    }
  }

  std::string_view s_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace hteb::cli
