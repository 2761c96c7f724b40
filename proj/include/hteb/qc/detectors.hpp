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

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/language.hpp"
#include "hteb/taxonomy.hpp"

namespace hteb::qc {

enum class ErrorType {
  kIdentical,
  kEmpty,
  kEllipsis,
  kJsonFragment,
  kReasoningLeak,
  kPrefixLeak,
  kWrongLanguage,
  kRunaway,
  kTruncated,
  kSummaryTooLong,
};

inline constexpr std::array<ErrorType, 10> kAllErrorTypes{
    ErrorType::kIdentical,     ErrorType::kEmpty,         ErrorType::kEllipsis,
    ErrorType::kJsonFragment,  ErrorType::kReasoningLeak, ErrorType::kPrefixLeak,
    ErrorType::kWrongLanguage, ErrorType::kRunaway,       ErrorType::kTruncated,
    ErrorType::kSummaryTooLong,
};

inline constexpr std::string_view name_of(ErrorType t) {
  switch (t) {
    case ErrorType::kIdentical: return "identical";
    case ErrorType::kEmpty: return "empty";
    case ErrorType::kEllipsis: return "ellipsis";
    case ErrorType::kJsonFragment: return "json_fragment";
    case ErrorType::kReasoningLeak: return "reasoning_leak";
    case ErrorType::kPrefixLeak: return "prefix_leak";
    case ErrorType::kWrongLanguage: return "wrong_language";
    case ErrorType::kRunaway: return "runaway";
    case ErrorType::kTruncated: return "truncated";
    case ErrorType::kSummaryTooLong: return "summary_too_long";
  }
  return "";
}

/// Independent per-type flags; a sample with several flags still counts as
/// one error in the total.
struct ErrorFlags {
  std::array<bool, kAllErrorTypes.size()> bits{};

  bool operator[](ErrorType t) const { return bits[static_cast<std::size_t>(t)]; }
  void set(ErrorType t, bool v = true) { bits[static_cast<std::size_t>(t)] = v; }
  bool any() const {
    for (bool b : bits) {
      if (b) return true;
    }
    return false;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (auto t : kAllErrorTypes) {
      if ((*this)[t]) out.emplace_back(name_of(t));
    }
    return out;
  }
};

inline constexpr double kDefaultLanguageConfidence = 0.6;

namespace detail {

inline bool is_space(unsigned char c) { return std::isspace(c) != 0; }

inline std::string_view trim_view(std::string_view s) {
  // ASCII whitespace plus no-break and ideographic spaces.
  constexpr std::string_view kWide[] = {"\xC2\xA0", "\xE3\x80\x80"};
  for (bool changed = true; changed;) {
    changed = false;
    while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1), changed = true;
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1), changed = true;
    for (auto ws : kWide) {
      if (s.starts_with(ws)) s.remove_prefix(ws.size()), changed = true;
      if (s.ends_with(ws)) s.remove_suffix(ws.size()), changed = true;
    }
  }
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && lower(s.substr(0, prefix.size())) == lower(prefix);
}

inline std::vector<std::string_view> lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto nl = s.find('\n', start);
    out.push_back(s.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

inline bool is_step_marker(std::string_view line) {
  line = trim_view(line);
  if (!starts_with_ci(line, "step ")) return false;
  std::size_t i = 5;
  const std::size_t digits_start = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  return i > digits_start && i < line.size() && line[i] == ':';
}

}  // namespace detail

/// Whitespace-delimited token count of the trimmed text.
inline std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : detail::trim_view(text)) {
    const bool ws = detail::is_space(static_cast<unsigned char>(c));
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

inline bool is_identical(std::string_view original, std::string_view output) {
  return detail::lower(detail::trim_view(original)) == detail::lower(detail::trim_view(output));
}

inline bool is_empty_output(std::string_view output) { return detail::trim_view(output).empty(); }

/// Output made only of "..", "..." or the Unicode ellipsis.
inline bool is_ellipsis(std::string_view output) {
  std::string_view s = detail::trim_view(output);
  if (s.empty()) return false;
  std::size_t dots = 0;
  bool unicode = false;
  while (!s.empty()) {
    if (s.starts_with("…")) {
      unicode = true;
      s.remove_prefix(3);
    } else if (s.front() == '.') {
      ++dots;
      s.remove_prefix(1);
    } else if (detail::is_space(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    } else {
      return false;
    }
  }
  return unicode || dots >= 2;
}

inline bool is_json_fragment(std::string_view output) {
  const auto s = detail::trim_view(output);
  return !s.empty() && (s.front() == '{' || s.front() == '[');
}

/// "Here are my reasoning" and "Let me think" anywhere; "I'll" at the start
/// of a line; "Step N:" as a line prefix. Case-insensitive.
inline bool has_reasoning_leak(std::string_view output) {
  const std::string low = detail::lower(output);
  if (low.find("here are my reasoning") != std::string::npos) return true;
  if (low.find("let me think") != std::string::npos) return true;
  for (auto line : detail::lines(output)) {
    const auto t = detail::trim_view(line);
    if (detail::starts_with_ci(t, "I'll") || detail::starts_with_ci(t, "I’ll")) return true;
    if (detail::is_step_marker(t)) return true;
  }
  return false;
}

inline bool has_prefix_leak(std::string_view output) {
  const auto s = detail::trim_view(output);
  for (std::string_view p : {"Translated text:", "Paraphrased text:", "Summary:", "Translation:", "Paraphrase:"}) {
    if (detail::starts_with_ci(s, p)) return true;
  }
  return false;
}

inline bool is_wrong_language(std::string_view output, const Language& expected,
                              const LanguageIdentifier& lang_id, double min_confidence) {
  if (is_empty_output(output)) return false;
  const auto det = lang_id.detect(output);
  return det.has_value() && contradicts(*det, expected, min_confidence);
}

/// Flags one transformation output. `expected` is the requested target
/// language for Translation and CrossTranslation, otherwise the input's.
inline ErrorFlags classify_errors(std::string_view original, std::string_view output, TransformationId id,
                                  const Language& expected, const LanguageIdentifier& lang_id,
                                  double min_confidence = kDefaultLanguageConfidence) {
  ErrorFlags f;
  const auto wc_in = static_cast<double>(word_count(original));
  const auto wc_out = static_cast<double>(word_count(output));
  f.set(ErrorType::kIdentical, is_identical(original, output));
  f.set(ErrorType::kEmpty, is_empty_output(output));
  f.set(ErrorType::kEllipsis, is_ellipsis(output));
  f.set(ErrorType::kJsonFragment, is_json_fragment(output));
  f.set(ErrorType::kReasoningLeak, has_reasoning_leak(output));
  f.set(ErrorType::kPrefixLeak, has_prefix_leak(output));
  f.set(ErrorType::kWrongLanguage, is_wrong_language(output, expected, lang_id, min_confidence));
  const bool expands = id == TransformationId::kExpansion || id == TransformationId::kSummarisedExpansion;
  f.set(ErrorType::kRunaway, !expands && wc_out > 5.0 * wc_in);
  const bool summary_exempt = id == TransformationId::kSummarisation && wc_in > 3.0;
  f.set(ErrorType::kTruncated, !summary_exempt && wc_out < 0.2 * wc_in);
  f.set(ErrorType::kSummaryTooLong, id == TransformationId::kSummarisation && wc_out > wc_in);
  return f;
}

struct QcSample {
  std::string original;
  std::string output;
  TransformationId transformation;
  Language expected;
};

struct ErrorReport {
  std::size_t n = 0;
  std::array<double, kAllErrorTypes.size()> rate_percent{};
  double total_percent = 0.0;

  double rate(ErrorType t) const { return rate_percent[static_cast<std::size_t>(t)]; }
};

inline ErrorReport error_report(const std::vector<ErrorFlags>& flags) {
  if (flags.empty()) throw Error(Errc::kEmptyInput, "error report over no samples");
  ErrorReport r;
  r.n = flags.size();
  std::array<std::size_t, kAllErrorTypes.size()> counts{};
  std::size_t any = 0;
  for (const auto& f : flags) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += f.bits[i] ? 1 : 0;
    any += f.any() ? 1 : 0;
  }
  const auto n = static_cast<double>(r.n);
  for (std::size_t i = 0; i < counts.size(); ++i) r.rate_percent[i] = 100.0 * static_cast<double>(counts[i]) / n;
  r.total_percent = 100.0 * static_cast<double>(any) / n;
  return r;
}

inline ErrorReport error_report(const std::vector<QcSample>& samples, const LanguageIdentifier& lang_id,
                                double min_confidence = kDefaultLanguageConfidence) {
  if (samples.empty()) throw Error(Errc::kEmptyInput, "error report over no samples");
  std::vector<ErrorFlags> flags;
  flags.reserve(samples.size());
  for (const auto& s : samples) {
    flags.push_back(classify_errors(s.original, s.output, s.transformation, s.expected, lang_id, min_confidence));
  }
  return error_report(flags);
}

}  // namespace hteb::qc
