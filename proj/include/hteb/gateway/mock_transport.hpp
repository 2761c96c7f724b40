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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hteb/error.hpp"
#include "hteb/gateway/transport.hpp"
#include "hteb/hashing.hpp"
#include "hteb/language.hpp"

namespace hteb::gateway {

/// Key under which a canned chat fixture is looked up.
inline std::string request_hash(const json& body) { return sha256_hex(body.dump()); }

namespace mock {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

/// Splits leading/trailing ASCII punctuation off a token.
struct Token {
  std::string lead, core, trail;
};

inline Token split_token(const std::string& w) {
  std::size_t b = 0, e = w.size();
  auto punct = [](char c) { return static_cast<unsigned char>(c) < 0x80 && std::ispunct(static_cast<unsigned char>(c)); };
  while (b < e && punct(w[b])) ++b;
  while (e > b && punct(w[e - 1])) --e;
  return {w.substr(0, b), w.substr(b, e - b), w.substr(e)};
}

// Pseudo-translation: English function words are swapped for the target's,
// content words carry a per-language ending. Arabic is a letter-by-letter
// transliteration so the output is in Arabic script.
struct PseudoLanguage {
  std::string_view code;
  std::string_view ending;
  std::map<std::string, std::string, std::less<>> function_words;  // English -> target
};

inline const std::vector<PseudoLanguage>& pseudo_languages() {
  static const std::vector<PseudoLanguage> kLangs = {
      {"spa", "o", {{"the", "el"}, {"a", "un"}, {"an", "un"}, {"is", "es"}, {"are", "son"},
                    {"and", "y"}, {"of", "de"}, {"in", "en"}, {"with", "con"}, {"for", "para"},
                    {"on", "sobre"}, {"not", "no"}, {"man", "hombre"}, {"woman", "mujer"},
                    {"people", "gente"}, {"this", "este"}, {"to", "a"}, {"how", "cómo"},
                    {"what", "qué"}}},
      {"fra", "e", {{"the", "le"}, {"a", "un"}, {"an", "un"}, {"is", "est"}, {"are", "sont"},
                    {"and", "et"}, {"of", "de"}, {"in", "dans"}, {"with", "avec"}, {"for", "pour"},
                    {"on", "sur"}, {"not", "pas"}, {"man", "homme"}, {"woman", "femme"},
                    {"people", "gens"}, {"this", "ce"}, {"to", "au"}, {"how", "comment"},
                    {"what", "quoi"}}},
      {"deu", "en", {{"the", "der"}, {"a", "ein"}, {"an", "ein"}, {"is", "ist"}, {"are", "sind"},
                     {"and", "und"}, {"of", "von"}, {"in", "im"}, {"with", "mit"}, {"for", "für"},
                     {"on", "auf"}, {"not", "nicht"}, {"man", "mann"}, {"woman", "frau"},
                     {"people", "leute"}, {"this", "dieser"}, {"to", "zu"}, {"how", "wie"},
                     {"what", "was"}}},
      {"tur", "lar", {{"the", ""}, {"a", "bir"}, {"an", "bir"}, {"is", ""}, {"are", ""},
                      {"and", "ve"}, {"of", ""}, {"in", "içinde"}, {"with", "ile"}, {"for", "için"},
                      {"on", "üstünde"}, {"not", "değil"}, {"man", "adam"}, {"woman", "kadın"},
                      {"people", "insanlar"}, {"this", "bu"}, {"to", ""}, {"how", "nasıl"},
                      {"what", "ne"}}},
  };
  return kLangs;
}

inline const PseudoLanguage* find_pseudo(std::string_view code) {
  for (const auto& l : pseudo_languages()) {
    if (l.code == code) return &l;
  }
  return nullptr;
}

// a..z -> distinct Arabic letters.
inline const std::vector<std::string>& arabic_letters() {
  static const std::vector<std::string> kLetters = {
      "ا", "ب", "ك", "د", "ي", "ف", "غ", "ه", "ئ", "ج", "ق", "ل", "م",
      "ن", "و", "پ", "ض", "ر", "س", "ت", "ؤ", "ڤ", "ث", "خ", "ى", "ز"};
  return kLetters;
}

inline std::string to_arabic(std::string_view text) {
  std::string out;
  for (char c : text) {
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l >= 'a' && l <= 'z') {
      out += arabic_letters()[static_cast<std::size_t>(l - 'a')];
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string from_arabic(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    bool matched = false;
    for (std::size_t k = 0; k < arabic_letters().size(); ++k) {
      const auto& a = arabic_letters()[k];
      if (text.compare(i, a.size(), a) == 0) {
        out.push_back(static_cast<char>('a' + k));
        i += a.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(text[i++]);
  }
  return out;
}

inline bool has_arabic(std::string_view text) {
  for (char32_t cp : detail::decode_utf8(text)) {
    if (detail::script_of(cp) == Script::kArabic) return true;
  }
  return false;
}

/// Undoes a pseudo-translation from `code` back to English (lossy).
inline std::string to_english_from(std::string_view text, std::string_view code) {
  if (code == "ara" || code == "arb") return from_arabic(text);
  const auto* lang = find_pseudo(code);
  if (lang == nullptr) return std::string(text);
  std::vector<std::string> out;
  for (const auto& w : split_words(text)) {
    auto t = split_token(w);
    const auto lw = lower(t.core);
    std::string replaced;
    bool is_function = false;
    for (const auto& [eng, tgt] : lang->function_words) {
      if (!tgt.empty() && tgt == lw) {
        replaced = eng;
        is_function = true;
        break;
      }
    }
    if (!is_function) {
      replaced = t.core;
      if (replaced.size() > lang->ending.size() + 2 &&
          lower(replaced).ends_with(lang->ending)) {
        replaced.resize(replaced.size() - lang->ending.size());
      }
    }
    out.push_back(t.lead + replaced + t.trail);
  }
  return join_words(out);
}

inline std::string from_english_to(std::string_view text, std::string_view family) {
  if (family == "ara") return to_arabic(text);
  const auto* lang = find_pseudo(family);
  if (lang == nullptr) return std::string(text);
  std::vector<std::string> out;
  for (const auto& w : split_words(text)) {
    auto t = split_token(w);
    const auto lw = lower(t.core);
    if (auto it = lang->function_words.find(lw); it != lang->function_words.end()) {
      if (it->second.empty()) {
        if (!t.lead.empty() || !t.trail.empty()) out.push_back(t.lead + t.trail);
        continue;
      }
      out.push_back(t.lead + it->second + t.trail);
    } else if (!t.core.empty()) {
      out.push_back(t.lead + t.core + std::string(lang->ending) + t.trail);
    } else {
      out.push_back(w);
    }
  }
  return join_words(out);
}

/// Back-translation to English loses articles and casing, the way real
/// round trips tend to lose small function words.
inline std::string lossy_english(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& w : split_words(text)) {
    const auto t = split_token(w);
    const auto lw = lower(t.core);
    if (lw == "a" || lw == "an" || lw == "the") {
      if (!t.lead.empty() || !t.trail.empty()) out.push_back(t.lead + t.trail);
      continue;
    }
    out.push_back(w);
  }
  std::string s = join_words(out);
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

inline std::string pseudo_translate(std::string_view text, const Language& target) {
  std::string english(text);
  if (has_arabic(text)) {
    english = lossy_english(from_arabic(text));
  } else if (auto det = HeuristicLanguageIdentifier().detect(text);
             det && !det->code.empty() && det->code != "eng") {
    english = lossy_english(to_english_from(text, det->code));
  }
  return from_english_to(english, target.family());
}

inline std::string paraphrase(std::string_view text) {
  static const std::map<std::string, std::string, std::less<>> kSynonyms = {
      {"man", "guy"},         {"woman", "lady"},        {"playing", "performing"},
      {"plays", "performs"},  {"big", "large"},         {"small", "little"},
      {"quickly", "rapidly"}, {"dog", "hound"},         {"cat", "kitten"},
      {"car", "vehicle"},     {"running", "jogging"},   {"eating", "consuming"},
      {"child", "kid"},       {"people", "folks"},      {"house", "home"},
      {"buy", "purchase"},    {"help", "assist"},       {"show", "display"},
      {"fast", "speedy"},     {"good", "fine"},         {"bad", "poor"}};
  bool changed = false;
  std::vector<std::string> out;
  for (const auto& w : split_words(text)) {
    auto t = split_token(w);
    if (auto it = kSynonyms.find(lower(t.core)); it != kSynonyms.end()) {
      out.push_back(t.lead + it->second + t.trail);
      changed = true;
    } else {
      out.push_back(w);
    }
  }
  std::string s = join_words(out);
  return changed ? s : "In other words, " + s;
}

inline bool is_question(std::string_view text) {
  const auto words = split_words(text);
  return !words.empty() && words.back().ends_with("?");
}

inline std::string strip_final_punct(std::string s) {
  while (!s.empty() && (s.back() == '.' || s.back() == '?' || s.back() == '!')) s.pop_back();
  return s;
}

inline std::string style_change(std::string_view text) {
  return (is_question(text) ? "Might one kindly ask: " : "It may be formally noted that ") +
         std::string(text);
}

inline std::string expand(std::string_view text) {
  if (is_question(text)) {
    return strip_final_punct(std::string(text)) +
           ", taking into account the surrounding context and any relevant details that might matter?";
  }
  return strip_final_punct(std::string(text)) +
         ", which happens in an ordinary setting with several further details that give the scene more context.";
}

inline std::string summarise(std::string_view text) {
  const auto words = split_words(text);
  if (words.empty()) return {};
  const std::size_t keep = std::max<std::size_t>(1, words.size() / 2);
  std::vector<std::string> kept(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(keep));
  std::string s = strip_final_punct(join_words(kept));
  return s + (is_question(text) ? "?" : ".");
}

// Canonical English spelling of every pseudo-language function word.
inline const std::unordered_map<std::string, std::string>& canonical_function_words() {
  static const auto kMap = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& l : pseudo_languages()) {
      for (const auto& [eng, tgt] : l.function_words) {
        if (!tgt.empty()) m.emplace(tgt, eng);
      }
    }
    return m;
  }();
  return kMap;
}

}  // namespace mock

/// Offline transport. Chat requests are answered from canned fixtures keyed
/// by request hash (or by model + input text), then by a deterministic
/// synthetic rewriter that understands the transformation prompts. Embedding
/// requests are answered by signed feature hashing.
///
/// <dir>/mock.json (optional):
///   {"synthetic": true,
///    "chat_models": {"<id>": {"defects": {"<kind>": rate}, "judge_bias": 0}},
///    "embedding_models": {"<id>": {"kind": "lexical"|"crosslingual", "dim": 256}}}
/// <dir>/chat.jsonl: {"key": sha256} or {"model"?, "input"}, plus "output".
/// <dir>/embeddings.jsonl: {"model", "text", "vector"}.
class MockTransport : public Transport {
 public:
  MockTransport() = default;

  explicit MockTransport(const std::filesystem::path& dir) {
    if (std::filesystem::exists(dir / "mock.json")) {
      std::ifstream in(dir / "mock.json");
      try {
        config_ = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(Errc::kConfig, "mock.json: " + std::string(e.what()));
      }
    }
    synthetic_ = config_.value("synthetic", true);
    read_jsonl(dir / "chat.jsonl", [&](const json& j) {
      const auto out = j.at("output").get<std::string>();
      if (j.contains("key")) {
        by_hash_[j["key"].get<std::string>()] = out;
      } else {
        by_input_[j.value("model", std::string()) + '\x1f' + j.at("input").get<std::string>()] = out;
      }
    });
    read_jsonl(dir / "embeddings.jsonl", [&](const json& j) {
      embed_fixtures_[j.at("model").get<std::string>() + '\x1f' + j.at("text").get<std::string>()] =
          j.at("vector").get<std::vector<double>>();
    });
  }

  void add_chat_fixture(const std::string& input, const std::string& output, const std::string& model = "") {
    by_input_[model + '\x1f' + input] = output;
  }
  void add_chat_hash_fixture(const std::string& key, const std::string& output) { by_hash_[key] = output; }
  void add_embedding_fixture(const std::string& model, const std::string& text, std::vector<double> v) {
    embed_fixtures_[model + '\x1f' + text] = std::move(v);
  }
  void set_synthetic(bool on) { synthetic_ = on; }
  void set_config(json config) { config_ = std::move(config); }

  int chat_calls() const { return chat_calls_.load(); }
  int embed_calls() const { return embed_calls_.load(); }

  json chat(const json& body) override {
    ++chat_calls_;
    std::string model, content;
    try {
      model = body.at("model").get<std::string>();
      content = body.at("messages").at(0).at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(Errc::kProtocol, std::string("mock: bad chat body: ") + e.what());
    }
    std::optional<std::string> out;
    if (auto it = by_hash_.find(request_hash(body)); it != by_hash_.end()) out = it->second;
    const auto prompt = parse_prompt(content);
    if (!out) {
      for (const auto& key : {model + '\x1f' + prompt.input, std::string("\x1f") + prompt.input}) {
        if (auto it = by_input_.find(key); it != by_input_.end()) {
          out = it->second;
          break;
        }
      }
    }
    if (!out) {
      if (!synthetic_) throw Error(Errc::kTransport, "mock: no fixture for request");
      out = synthesize(model, prompt);
    }
    return {{"choices", json::array({{{"index", 0},
                                      {"message", {{"role", "assistant"}, {"content", *out}}},
                                      {"finish_reason", "stop"}}})}};
  }

  json embeddings(const json& body) override {
    ++embed_calls_;
    const auto model = body.at("model").get<std::string>();
    json data = json::array();
    const auto& input = body.at("input");
    for (std::size_t i = 0; i < input.size(); ++i) {
      const auto text = input[i].get<std::string>();
      std::vector<double> v;
      if (auto it = embed_fixtures_.find(model + '\x1f' + text); it != embed_fixtures_.end()) {
        v = it->second;
      } else {
        v = synthetic_embedding(model, text);
      }
      data.push_back({{"index", i}, {"embedding", v}});
    }
    return {{"data", data}, {"model", model}};
  }

  /// Marker that identifies a judging request.
  static constexpr std::string_view kJudgeMarker = "Transformed text:\n";

 private:
  enum class Kind { kTranslate, kParaphrase, kStyle, kExpand, kSummarise, kJudge, kUnknown };

  struct ParsedPrompt {
    Kind kind = Kind::kUnknown;
    std::string target;  // language name as written in the prompt
    std::string input;
    std::string original;     // judge requests
    std::string transformed;  // judge requests
  };

  static std::string after(const std::string& s, std::string_view marker) {
    const auto p = s.find(marker);
    return p == std::string::npos ? std::string() : s.substr(p + marker.size());
  }

  static std::string sentence_word_after(const std::string& s, std::string_view marker) {
    const auto rest = after(s, marker);
    const auto end = rest.find_first_of(".\n");
    return rest.substr(0, end);
  }

  static ParsedPrompt parse_prompt(const std::string& content) {
    ParsedPrompt p;
    if (content.find("Text to summarize:") != std::string::npos) {
      p.kind = Kind::kSummarise;
      p.input = after(content, "Text to summarize:\n\n");
    } else {
      const auto sep = content.find("\n\n");
      p.input = sep == std::string::npos ? content : content.substr(sep + 2);
      const auto head = content.substr(0, sep);
      if (head.starts_with("Translate the following text to ")) {
        p.kind = Kind::kTranslate;
        p.target = sentence_word_after(head, "Translate the following text to ");
      } else if (head.starts_with("Rephrase")) {
        p.kind = Kind::kParaphrase;
      } else if (head.starts_with("Change the style")) {
        p.kind = Kind::kStyle;
      } else if (head.starts_with("Expand")) {
        p.kind = Kind::kExpand;
      }
    }
    if (p.target.empty()) p.target = sentence_word_after(content, "You MUST answer in ");
    if (content.find(kJudgeMarker) != std::string::npos) {
      p.kind = Kind::kJudge;
      const auto t = content.find(kJudgeMarker);
      const auto o = content.find("Original text:\n");
      p.transformed = content.substr(t + kJudgeMarker.size());
      if (o != std::string::npos && o < t) {
        p.original = mock::strip_final_punct(content.substr(o + 15, t - o - 15));
      }
    }
    return p;
  }

  double draw(std::string_view model, std::string_view salt, std::string_view text) const {
    const auto h = mock::fnv1a(std::string(model) + '\x1f' + std::string(salt) + '\x1f' + std::string(text));
    return static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
  }

  std::string synthesize(const std::string& model, const ParsedPrompt& p) const {
    const json model_cfg = config_.value("chat_models", json::object()).value(model, json::object());
    if (p.kind == Kind::kJudge) return judge(model, model_cfg, p);

    std::string out;
    switch (p.kind) {
      case Kind::kTranslate: {
        const auto target = Language::try_parse(p.target);
        out = target ? mock::pseudo_translate(p.input, *target) : p.input;
        break;
      }
      case Kind::kParaphrase: out = mock::paraphrase(p.input); break;
      case Kind::kStyle: out = mock::style_change(p.input); break;
      case Kind::kExpand: out = mock::expand(p.input); break;
      case Kind::kSummarise: out = mock::summarise(p.input); break;
      default: out = p.input; break;
    }
    // Injected generator defects, each drawn independently per request.
    const json defects = model_cfg.value("defects", json::object());
    for (const auto& [kind, rate] : defects.items()) {
      if (draw(model, kind, p.input) >= rate.get<double>()) continue;
      if (kind == "empty") return "";
      if (kind == "identical") return p.input;
      if (kind == "ellipsis") return "...";
      if (kind == "prefix_leak") return "Translated text: " + out;
      if (kind == "reasoning_leak") return "Let me think about this.\n" + out;
      if (kind == "json_fragment") return json{{"text", out}}.dump();
      if (kind == "runaway") {
        std::string r;
        for (int i = 0; i < 6; ++i) r += (i ? " " : "") + p.input;
        return r;
      }
      if (kind == "truncated") {
        const auto words = mock::split_words(p.input);
        return words.empty() ? "" : words.front();
      }
      if (kind == "code_fence") return "```\n" + out + "\n```";
    }
    return out;
  }

  std::string judge(const std::string& model, const json& model_cfg, const ParsedPrompt& p) const {
    const std::string t = mock::lower(p.transformed);
    const bool defective = t.empty() || t == "..." || t.starts_with("{") ||
                           t.find("text:") != std::string::npos ||
                           t.find("let me think") != std::string::npos ||
                           mock::lower(p.original) == mock::strip_final_punct(t);
    double score = defective ? 1.5 : 4.0 + draw(model, "judge", p.transformed);
    score += model_cfg.value("judge_bias", 0.0);
    const int s = std::clamp(static_cast<int>(std::lround(score)), 1, 5);
    return "The transformed text was compared with the original.\nScore: " + std::to_string(s);
  }

  std::vector<double> synthetic_embedding(const std::string& model, const std::string& text) const {
    const json cfg = config_.value("embedding_models", json::object()).value(model, json::object());
    const auto dim = cfg.value("dim", std::size_t{256});
    const bool crosslingual = cfg.value("kind", std::string("lexical")) == "crosslingual";
    std::vector<double> v(dim, 0.0);
    auto add = [&](const std::string& feature, double weight) {
      const auto h = splitmix64(mock::fnv1a(feature));
      v[h % dim] += (h >> 63) != 0 ? weight : -weight;
    };
    add("\x1f" "bias", 0.2);
    std::string source = crosslingual && mock::has_arabic(text) ? mock::from_arabic(text) : text;
    for (const auto& w : mock::split_words(source)) {
      std::string core = mock::lower(mock::split_token(w).core);
      if (core.empty()) continue;
      if (crosslingual) {
        if (auto it = mock::canonical_function_words().find(core);
            it != mock::canonical_function_words().end()) {
          core = it->second;
        }
        if (core.size() > 4) core.resize(4);
        add("s:" + core, 1.0);
      } else {
        add("w:" + core, 1.0);
      }
      const std::string padded = " " + core + " ";
      for (std::size_t i = 0; i + 3 <= padded.size(); ++i) add("g:" + padded.substr(i, 3), 0.4);
    }
    return v;
  }

  template <typename F>
  static void read_jsonl(const std::filesystem::path& file, F&& f) {
    std::ifstream in(file);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        f(json::parse(line));
      } catch (const json::exception& e) {
        throw Error(Errc::kConfig, file.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  json config_ = json::object();
  bool synthetic_ = true;
  std::unordered_map<std::string, std::string> by_hash_;
  std::unordered_map<std::string, std::string> by_input_;
  std::unordered_map<std::string, std::vector<double>> embed_fixtures_;
  std::atomic<int> chat_calls_{0};
  std::atomic<int> embed_calls_{0};
};

}  // namespace hteb::gateway
