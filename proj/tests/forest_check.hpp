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

#include <json.hpp>
#include <regex>
#include <string>
#include <vector>

namespace hteb::testing {

struct ForestRow {
  std::string transformation;
  std::string hl_shift, ci_low, ci_high, p_holm, median_abs_delta;
  bool significant = false;
};

/// Pulls the data attributes off every row group of a forest plot.
inline std::vector<ForestRow> forest_rows(const std::string& svg) {
  static const std::regex row_re(
      "<g class=\"row\" data-transformation=\"([^\"]*)\" data-hl-shift=\"([^\"]*)\" data-ci-low=\"([^\"]*)\" "
      "data-ci-high=\"([^\"]*)\" data-p-holm=\"([^\"]*)\" data-median-abs-delta=\"([^\"]*)\" "
      "data-significant=\"(true|false)\"");
  std::vector<ForestRow> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), row_re); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.push_back({m[1], m[2], m[3], m[4], m[5], m[6], m[7] == "true"});
  }
  return out;
}

/// Empty when every forest row carries exactly the stats.json numbers, in
/// order; otherwise the first mismatch.
inline std::string forest_mismatch(const std::string& svg, const nlohmann::json& stats) {
  const auto rows = forest_rows(svg);
  const auto& ts = stats.at("transformations");
  if (rows.size() != ts.size()) {
    return "forest has " + std::to_string(rows.size()) + " rows, stats.json " + std::to_string(ts.size());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& t = ts[i];
    const auto name = t.at("transformation").get<std::string>();
    if (r.transformation != name) return "row " + std::to_string(i) + " is " + r.transformation;
    if (r.hl_shift != t.at("hl_shift").dump() || r.ci_low != t.at("ci")[0].dump() ||
        r.ci_high != t.at("ci")[1].dump() || r.p_holm != t.at("p_holm").dump() ||
        r.median_abs_delta != t.at("median_abs_delta").dump()) {
      return name + " differs from stats.json";
    }
    if (r.significant != (t.at("p_holm").get<double>() < 0.05)) return name + " has the wrong colour class";
  }
  return "";
}

}  // namespace hteb::testing
