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
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hteb/error.hpp"

namespace hteb {

enum class Script {
  kUnknown,
  kLatin,
  kArabic,
  kCyrillic,
  kGreek,
  kDevanagari,
  kBengali,
  kGurmukhi,
  kGujarati,
  kOriya,
  kTamil,
  kTelugu,
  kKannada,
  kMalayalam,
  kEthiopic,
  kHangul,
  kJapanese,
  kHan,
};

namespace detail {

struct LanguageInfo {
  std::string_view code;
  std::string_view name;
  Script script;
};

// ISO 639-3 codes used by the benchmark datasets.
inline constexpr std::array<LanguageInfo, 45> kLanguages{{
    {"afr", "Afrikaans", Script::kLatin},
    {"amh", "Amharic", Script::kEthiopic},
    {"ara", "Arabic", Script::kArabic},
    {"arb", "Arabic (MSA)", Script::kArabic},
    {"arq", "Arabic (Algerian)", Script::kArabic},
    {"ary", "Arabic (Moroccan)", Script::kArabic},
    {"asm", "Assamese", Script::kBengali},
    {"ben", "Bengali", Script::kBengali},
    {"dan", "Danish", Script::kLatin},
    {"deu", "German", Script::kLatin},
    {"eng", "English", Script::kLatin},
    {"fra", "French", Script::kLatin},
    {"guj", "Gujarati", Script::kGujarati},
    {"hau", "Hausa", Script::kLatin},
    {"hin", "Hindi", Script::kDevanagari},
    {"ibo", "Igbo", Script::kLatin},
    {"ind", "Indonesian", Script::kLatin},
    {"ita", "Italian", Script::kLatin},
    {"jpn", "Japanese", Script::kJapanese},
    {"kan", "Kannada", Script::kKannada},
    {"kin", "Kinyarwanda", Script::kLatin},
    {"kor", "Korean", Script::kHangul},
    {"lin", "Lingala", Script::kLatin},
    {"lug", "Luganda", Script::kLatin},
    {"mal", "Malayalam", Script::kMalayalam},
    {"mar", "Marathi", Script::kDevanagari},
    {"nld", "Dutch", Script::kLatin},
    {"orm", "Oromo", Script::kLatin},
    {"ory", "Odia", Script::kOriya},
    {"pan", "Punjabi", Script::kGurmukhi},
    {"pcm", "Nigerian Pidgin", Script::kLatin},
    {"pol", "Polish", Script::kLatin},
    {"run", "Rundi", Script::kLatin},
    {"sna", "Shona", Script::kLatin},
    {"som", "Somali", Script::kLatin},
    {"spa", "Spanish", Script::kLatin},
    {"swa", "Swahili", Script::kLatin},
    {"tam", "Tamil", Script::kTamil},
    {"tel", "Telugu", Script::kTelugu},
    {"tir", "Tigrinya", Script::kEthiopic},
    {"tur", "Turkish", Script::kLatin},
    {"urd", "Urdu", Script::kArabic},
    {"xho", "isiXhosa", Script::kLatin},
    {"yor", "Yoruba", Script::kLatin},
    {"zul", "Zulu", Script::kLatin},
}};

inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline const LanguageInfo* find_language(std::string_view code_or_name) {
  const std::string key = lower_ascii(code_or_name);
  for (const auto& info : kLanguages) {
    if (key == info.code || key == lower_ascii(info.name)) return &info;
  }
  return nullptr;
}

}  // namespace detail

/// A language identified by its ISO 639-3 code.
class Language {
 public:
  Language() = default;

  /// Accepts an ISO 639-3 code ("deu") or an English name ("German").
  static Language parse(std::string_view code_or_name) {
    const auto* info = detail::find_language(code_or_name);
    if (info == nullptr) {
      throw Error(Errc::kInvalidArgument,
                  "unknown language '" + std::string(code_or_name) + "'");
    }
    return Language(info->code);
  }

  static std::optional<Language> try_parse(std::string_view code_or_name) {
    const auto* info = detail::find_language(code_or_name);
    if (info == nullptr) return std::nullopt;
    return Language(info->code);
  }

  const std::string& code() const { return code_; }
  bool empty() const { return code_.empty(); }

  std::string_view name() const {
    const auto* info = detail::find_language(code_);
    return info ? info->name : std::string_view(code_);
  }

  Script script() const {
    const auto* info = detail::find_language(code_);
    return info ? info->script : Script::kUnknown;
  }

  /// Arabic variants collapse to one macro-language.
  std::string_view family() const {
    if (code_ == "arb" || code_ == "arq" || code_ == "ary") return "ara";
    return code_;
  }

  bool same_language(const Language& other) const { return family() == other.family(); }

  friend bool operator==(const Language& a, const Language& b) { return a.code_ == b.code_; }
  friend auto operator<=>(const Language& a, const Language& b) { return a.code_ <=> b.code_; }

 private:
  explicit Language(std::string_view code) : code_(code) {}
  std::string code_;
};

inline std::vector<Language> parse_languages(const std::vector<std::string>& names) {
  std::vector<Language> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(Language::parse(n));
  return out;
}

// ---------------------------------------------------------------------------
// Language identification

struct LanguageDetection {
  /// ISO 639-3 code when the language is resolved, empty when only the
  /// script is known.
  std::string code;
  Script script = Script::kUnknown;
  double confidence = 0.0;
};

class LanguageIdentifier {
 public:
  virtual ~LanguageIdentifier() = default;
  virtual std::optional<LanguageDetection> detect(std::string_view text) const = 0;
};

namespace detail {

inline std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = c;
    if (c >= 0xF0) { len = 4; cp = c & 0x07; }
    else if (c >= 0xE0) { len = 3; cp = c & 0x0F; }
    else if (c >= 0xC0) { len = 2; cp = c & 0x1F; }
    if (i + len > s.size()) break;
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline Script script_of(char32_t cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z') ||
      (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) ||
      (cp >= 0x1E00 && cp <= 0x1EFF)) {
    return Script::kLatin;
  }
  if ((cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) ||
      (cp >= 0xFB50 && cp <= 0xFDFF) || (cp >= 0xFE70 && cp <= 0xFEFF)) {
    return Script::kArabic;
  }
  if (cp >= 0x0400 && cp <= 0x04FF) return Script::kCyrillic;
  if (cp >= 0x0370 && cp <= 0x03FF) return Script::kGreek;
  if (cp >= 0x0900 && cp <= 0x097F) return Script::kDevanagari;
  if (cp >= 0x0980 && cp <= 0x09FF) return Script::kBengali;
  if (cp >= 0x0A00 && cp <= 0x0A7F) return Script::kGurmukhi;
  if (cp >= 0x0A80 && cp <= 0x0AFF) return Script::kGujarati;
  if (cp >= 0x0B00 && cp <= 0x0B7F) return Script::kOriya;
  if (cp >= 0x0B80 && cp <= 0x0BFF) return Script::kTamil;
  if (cp >= 0x0C00 && cp <= 0x0C7F) return Script::kTelugu;
  if (cp >= 0x0C80 && cp <= 0x0CFF) return Script::kKannada;
  if (cp >= 0x0D00 && cp <= 0x0D7F) return Script::kMalayalam;
  if (cp >= 0x1200 && cp <= 0x139F) return Script::kEthiopic;
  if ((cp >= 0xAC00 && cp <= 0xD7AF) || (cp >= 0x1100 && cp <= 0x11FF)) return Script::kHangul;
  if (cp >= 0x3040 && cp <= 0x30FF) return Script::kJapanese;
  if (cp >= 0x4E00 && cp <= 0x9FFF) return Script::kHan;
  return Script::kUnknown;
}

struct StopwordSet {
  std::string_view code;
  std::vector<std::string_view> words;
};

// Short closed-class words; enough to separate the Latin-script pool and
// benchmark languages on sentence-length text.
inline const std::vector<StopwordSet>& latin_stopwords() {
  static const std::vector<StopwordSet> kSets = {
      {"eng", {"the", "a", "an", "is", "are", "was", "and", "of", "to", "in", "on", "with",
               "for", "this", "that", "it", "be", "by", "at", "from", "his", "her", "not",
               "or", "as", "has", "have", "what", "how", "who", "you", "i", "my", "man",
               "woman", "people", "there"}},
      {"spa", {"el", "la", "los", "las", "un", "una", "es", "está", "son", "y", "de", "del",
               "en", "con", "por", "para", "que", "se", "su", "al", "lo", "como", "pero",
               "hombre", "mujer", "muy", "también", "qué", "cómo"}},
      {"fra", {"le", "la", "les", "un", "une", "est", "sont", "et", "de", "des", "du", "en",
               "avec", "pour", "que", "qui", "dans", "sur", "il", "elle", "ne", "pas", "au",
               "aux", "homme", "femme", "une", "joue", "c'est", "l'homme"}},
      {"deu", {"der", "die", "das", "ein", "eine", "einen", "ist", "sind", "und", "mit",
               "für", "von", "zu", "den", "dem", "nicht", "auf", "im", "es", "sich", "auch",
               "mann", "frau", "spielt", "singt", "wird", "wie", "was"}},
      {"tur", {"bir", "ve", "bu", "da", "de", "için", "ile", "çok", "ne", "gibi", "olarak",
               "adam", "kadın", "değil", "daha", "şey", "var", "yok", "mi", "mı", "ama",
               "çalıyor", "oynuyor"}},
      {"ita", {"il", "lo", "la", "gli", "le", "un", "una", "è", "sono", "e", "di", "del",
               "della", "con", "per", "che", "non", "uomo", "donna", "sta", "nel"}},
      {"nld", {"de", "het", "een", "is", "zijn", "en", "van", "met", "voor", "niet", "op",
               "dat", "die", "man", "vrouw", "speelt", "ook"}},
      {"dan", {"en", "et", "er", "og", "det", "den", "til", "med", "på", "for", "ikke",
               "som", "af", "mand", "kvinde", "spiller"}},
      {"pol", {"jest", "i", "w", "na", "z", "się", "nie", "to", "że", "do", "mężczyzna",
               "kobieta", "gra", "jak", "od", "po"}},
      {"ind", {"yang", "dan", "di", "ini", "itu", "dengan", "untuk", "tidak", "dari",
               "ke", "sedang", "seorang", "pria", "wanita", "bermain", "adalah"}},
  };
  return kSets;
}

inline bool has_stopwords(std::string_view code) {
  for (const auto& set : latin_stopwords()) {
    if (set.code == code) return true;
  }
  return false;
}

}  // namespace detail

/// Script histogram plus Latin-script stopword voting. Returns nothing when
/// the evidence is too thin to decide.
class HeuristicLanguageIdentifier : public LanguageIdentifier {
 public:
  std::optional<LanguageDetection> detect(std::string_view text) const override {
    const auto cps = detail::decode_utf8(text);
    std::map<Script, int> counts;
    int letters = 0;
    for (char32_t cp : cps) {
      const Script s = detail::script_of(cp);
      if (s == Script::kUnknown) continue;
      ++counts[s];
      ++letters;
    }
    if (letters < 3) return std::nullopt;
    // Kana anywhere means Japanese even when Han dominates.
    if (counts.count(Script::kJapanese) != 0) {
      counts[Script::kJapanese] += counts[Script::kHan];
      counts.erase(Script::kHan);
    }
    const auto best = std::max_element(counts.begin(), counts.end(),
                                       [](auto& a, auto& b) { return a.second < b.second; });
    LanguageDetection det;
    det.script = best->first;
    det.confidence = static_cast<double>(best->second) / letters;
    if (det.script != Script::kLatin) {
      if (det.script == Script::kHangul) det.code = "kor";
      if (det.script == Script::kJapanese) det.code = "jpn";
      return det;
    }

    // Latin: vote with stopwords.
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
      const auto uc = static_cast<unsigned char>(c);
      if (std::isspace(uc) || (uc < 0x80 && std::ispunct(uc) && c != '\'')) {
        if (!cur.empty()) tokens.push_back(detail::lower_ascii(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tokens.push_back(detail::lower_ascii(cur));
    std::map<std::string_view, int> hits;
    int total_hits = 0;
    for (const auto& set : detail::latin_stopwords()) {
      std::set<std::string_view> words(set.words.begin(), set.words.end());
      int h = 0;
      for (const auto& t : tokens) h += words.count(t) != 0 ? 1 : 0;
      if (h > 0) {
        hits[set.code] = h;
        total_hits += h;
      }
    }
    if (hits.empty()) {
      det.confidence = 0.0;
      return det;
    }
    const auto top = std::max_element(hits.begin(), hits.end(),
                                      [](auto& a, auto& b) { return a.second < b.second; });
    if (top->second < 2) {
      det.confidence = 0.0;
      return det;
    }
    det.code = std::string(top->first);
    det.confidence *= static_cast<double>(top->second) / total_hits;
    return det;
  }
};

/// True when `det` confidently contradicts `expected`. Script-only
/// detections can only contradict across scripts.
inline bool contradicts(const LanguageDetection& det, const Language& expected, double threshold) {
  if (det.confidence < threshold) return false;
  const Script want = expected.script();
  if (want == Script::kUnknown) return false;
  const bool cjk_ok = want == Script::kJapanese && det.script == Script::kHan;
  if (det.script != want && !cjk_ok) return true;
  if (det.code.empty()) return false;
  if (Language::parse(det.code).family() == expected.family()) return false;
  // Latin languages without a stopword list can only be contradicted by a
  // near-unanimous vote for a covered language.
  return detail::has_stopwords(expected.family()) || det.confidence >= 0.85;
}

}  // namespace hteb
