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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hteb/cli/config.hpp"
#include "hteb/data/dataset.hpp"
#include "hteb/error.hpp"
#include "hteb/eval/embedder.hpp"
#include "hteb/eval/tasks.hpp"
#include "hteb/gateway/cache.hpp"
#include "hteb/gateway/gateway.hpp"
#include "hteb/gateway/http_transport.hpp"
#include "hteb/gateway/mock_transport.hpp"
#include "hteb/language.hpp"
#include "hteb/qc/detectors.hpp"
#include "hteb/qc/judge.hpp"
#include "hteb/report/emit.hpp"
#include "hteb/score.hpp"
#include "hteb/transform/engine.hpp"

namespace hteb::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum ExitCode : int { kExitOk = 0, kExitFatal = 1, kExitPartial = 2 };

/// Command-line values that override the config file.
struct Overrides {
  std::vector<std::int64_t> seeds;
  std::optional<fs::path> mock_dir;
  std::optional<fs::path> output_dir;
  std::optional<std::size_t> parallelism;
  bool original_only = false;
};

inline void apply(BenchmarkConfig& c, const Overrides& o) {
  if (!o.seeds.empty()) c.run_seeds = o.seeds;
  if (o.mock_dir) c.mock_dir = fs::absolute(*o.mock_dir);
  if (o.output_dir) c.output_dir = fs::absolute(*o.output_dir);
  if (o.parallelism) c.parallelism = *o.parallelism;
}

/// Shared state of one CLI invocation.
class Session {
 public:
  Session(BenchmarkConfig config, bool original_only = false, std::ostream& out = std::cout,
          std::ostream& log = std::cerr)
      : config_(std::move(config)), original_only_(original_only), out_(out), log_(log) {}

  const BenchmarkConfig& config() const { return config_; }
  std::ostream& out() { return out_; }
  std::ostream& log() { return log_; }
  bool original_only() const { return original_only_; }

  gateway::Gateway& gateway() {
    if (!gateway_) {
      std::shared_ptr<gateway::Transport> transport;
      gateway::GatewayOptions opt;
      opt.parallelism = config_.parallelism;
      opt.retry.max_attempts = config_.max_attempts;
      if (config_.mock_dir) {
        transport = std::make_shared<gateway::MockTransport>(config_.resolve(*config_.mock_dir));
        opt.retry.backoff_seconds.clear();  // nothing to wait for offline
      } else {
        gateway::HttpSettings s;
        s.chat_url = config_.endpoints.chat;
        s.embed_url = config_.endpoints.embeddings;
        s.api_key = gateway::env_or(config_.endpoints.api_key_env.c_str(), "");
        s.timeout_seconds = config_.endpoints.timeout_seconds;
        transport = std::make_shared<gateway::HttpTransport>(gateway::settings_from_env(s));
      }
      auto cache = std::make_shared<gateway::TransformCache>(config_.cache_path() / "chat");
      gateway_ = std::make_unique<gateway::Gateway>(transport, cache, opt);
    }
    return *gateway_;
  }

  std::shared_ptr<eval::EmbeddingStore> embedding_store() {
    if (!store_) store_ = std::make_shared<eval::EmbeddingStore>(config_.cache_path() / "embeddings");
    return store_;
  }

  const std::vector<data::EvalDataset>& datasets() {
    if (!datasets_loaded_) {
      for (const auto& m : config_.datasets) datasets_.push_back(data::load_dataset(config_.resolve(m)));
      datasets_loaded_ = true;
    }
    return datasets_;
  }

 private:
  BenchmarkConfig config_;
  bool original_only_;
  std::ostream& out_;
  std::ostream& log_;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::shared_ptr<eval::EmbeddingStore> store_;
  std::vector<data::EvalDataset> datasets_;
  bool datasets_loaded_ = false;
};

// ---------------------------------------------------------------------------
// Files

/// Writes through a temporary file so an interrupted run never leaves a
/// half-written output behind.
inline void write_atomically(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + path.parent_path().string());
  const fs::path tmp = path.string() + ".tmp";
  report::write_file(tmp, content);
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::kIo, "cannot rename " + tmp.string());
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Splits CSV text into rows of fields; quoted fields may hold commas,
/// quotes and newlines.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(Errc::kIo, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const char* kScoresHeader = "model,dataset,task,condition,run_seed,metric,value,error";

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string scores_csv(const std::vector<ScoreCell>& cells) {
  std::ostringstream s;
  s << kScoresHeader << '\n';
  for (const auto& c : cells) {
    s << csv_field(c.model_id) << ',' << csv_field(c.dataset_id) << ',' << name_of(c.task) << ','
      << condition_name(c.condition) << ',' << c.run_seed << ',' << c.metric << ','
      << (c.value ? format_value(*c.value) : std::string()) << ',' << csv_field(c.error) << '\n';
  }
  return s.str();
}

inline std::vector<ScoreCell> read_scores(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());
  if (rows.empty() || rows.front().size() != 8 || rows.front()[0] != "model") {
    throw Error(Errc::kIo, path.string() + ": not a scores file");
  }
  std::vector<ScoreCell> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 8) throw Error(Errc::kIo, path.string() + ": row " + std::to_string(i + 1) + " has " +
                                                  std::to_string(r.size()) + " fields");
    ScoreCell c;
    c.model_id = r[0];
    c.dataset_id = r[1];
    try {
      c.task = parse_task(r[2]);
      c.condition = parse_condition(r[3]);
      c.run_seed = std::stoll(r[4]);
      c.metric = r[5];
      if (!r[6].empty()) c.value = std::stod(r[6]);
    } catch (const std::exception& e) {
      throw Error(Errc::kIo, path.string() + ": row " + std::to_string(i + 1) + ": " + e.what());
    }
    c.error = r[7];
    out.push_back(std::move(c));
  }
  return out;
}

inline fs::path transformed_file(const BenchmarkConfig& c, const std::string& dataset_id, TransformationId t,
                                 std::int64_t seed) {
  return c.transformed_dir() / dataset_id / std::string(name_of(t)) / (std::to_string(seed) + ".jsonl");
}

inline transform::TransformedDataset read_transformed(const fs::path& file, const std::string& dataset_id,
                                                      TransformationId t, std::int64_t seed) {
  transform::TransformedDataset td{dataset_id, t, seed, {}};
  for (const auto& row : data::read_jsonl(file)) td.records.push_back(transform::record_from_json(row));
  return td;
}

// ---------------------------------------------------------------------------
// Quality control helpers

/// Language a transformation output should be in: the final step's target
/// for Translation and CrossTranslation, the source otherwise.
inline Language expected_language(const transform::TransformRecord& r) {
  if ((r.transformation == TransformationId::kTranslation ||
       r.transformation == TransformationId::kCrossTranslation) &&
      !r.sampled_languages.empty()) {
    if (auto l = Language::try_parse(r.sampled_languages.back())) return *l;
  }
  return r.source_language;
}

inline qc::ErrorFlags flags_of(const transform::TransformRecord& r, const LanguageIdentifier& lang_id) {
  return qc::classify_errors(r.source_text, r.final_text, r.transformation, expected_language(r), lang_id);
}

inline std::string error_report_header() {
  std::string h = "name,n";
  for (auto t : qc::kAllErrorTypes) h += "," + std::string(qc::name_of(t));
  return h + ",total\n";
}

inline std::string error_report_row(const std::string& name, const qc::ErrorReport& r) {
  std::string row = csv_field(name) + "," + std::to_string(r.n);
  for (auto t : qc::kAllErrorTypes) row += "," + report::fixed2(r.rate(t));
  return row + "," + report::fixed2(r.total_percent) + "\n";
}

// ---------------------------------------------------------------------------
// Commands

/// Every (dataset, transformation, seed) becomes one JSONL file of records
/// with their QC flags. Generation goes through the cache, so a rerun after
/// an interruption only generates what is missing.
inline int cmd_transform(Session& s) {
  const auto& cfg = s.config();
  if (cfg.generator_id.empty()) throw Error(Errc::kConfig, "no generator configured");
  auto& gw = s.gateway();
  const HeuristicLanguageIdentifier lang_id;
  std::size_t records = 0, failures = 0;
  std::map<TransformationId, std::vector<qc::ErrorFlags>> flags_by_t;
  for (const auto& ds : s.datasets()) {
    for (auto t : cfg.transformations) {
      const auto spec = transform::spec_of(t);
      for (auto seed : cfg.run_seeds) {
        transform::RunConfig rc;
        rc.run_seed = seed;
        rc.generator_id = cfg.generator_id;
        const auto td = transform::transform_dataset(ds, spec, rc, gw);
        std::ostringstream body;
        for (const auto& r : td.records) {
          auto j = transform::to_json(r);
          if (!r.failed()) {
            const auto f = flags_of(r, lang_id);
            j["qc_flags"] = f.names();
            flags_by_t[t].push_back(f);
          }
          body << j.dump() << '\n';
        }
        write_atomically(transformed_file(cfg, ds.id, t, seed), body.str());
        records += td.records.size();
        failures += td.failures();
      }
    }
    s.log() << "transformed " << ds.id << '\n';
  }
  std::string qc = error_report_header();
  for (auto t : cfg.transformations) {
    if (!flags_by_t[t].empty()) qc += error_report_row(std::string(name_of(t)), qc::error_report(flags_by_t[t]));
  }
  write_atomically(cfg.transformed_dir() / "qc_report.csv", qc);
  if (records > 0 && failures == records) {
    throw Error(Errc::kTransport, "every transformation request failed");
  }
  if (failures > 0) {
    s.log() << failures << " of " << records << " texts failed to transform\n";
    return kExitPartial;
  }
  return kExitOk;
}

/// Scores Original and every configured transformation per model, dataset
/// and run seed into scores.csv.
inline int cmd_evaluate(Session& s) {
  const auto& cfg = s.config();
  if (cfg.embedding_models.empty()) throw Error(Errc::kConfig, "no embedding models configured");
  auto& gw = s.gateway();
  std::vector<ScoreCell> cells;
  for (const auto& model : cfg.embedding_models) {
    std::optional<std::string> instruction;
    if (auto it = cfg.instructions.find(model); it != cfg.instructions.end()) instruction = it->second;
    eval::GatewayEmbedder embedder(gw, model, instruction, s.embedding_store());
    for (const auto& ds : s.datasets()) {
      for (auto seed : cfg.run_seeds) cells.push_back(eval::evaluate(ds, std::nullopt, seed, embedder));
      if (s.original_only()) continue;
      for (auto t : cfg.transformations) {
        for (auto seed : cfg.run_seeds) {
          const auto file = transformed_file(cfg, ds.id, t, seed);
          if (!fs::exists(file)) {
            ScoreCell c;
            c.model_id = model;
            c.dataset_id = ds.id;
            c.task = ds.task;
            c.condition = t;
            c.run_seed = seed;
            c.metric = std::string(metric_of(ds.task));
            c.error = "IoError: missing " + file.string();
            cells.push_back(std::move(c));
            continue;
          }
          const auto td = read_transformed(file, ds.id, t, seed);
          cells.push_back(eval::evaluate(data::apply_overrides(ds, td.overrides()), t, seed, embedder));
        }
      }
    }
    s.log() << "evaluated " << model << '\n';
  }
  write_atomically(cfg.scores_file(), scores_csv(cells));
  const auto failed = std::count_if(cells.begin(), cells.end(), [](const ScoreCell& c) { return !c.ok(); });
  if (failed > 0) {
    s.log() << failed << " of " << cells.size() << " score cells failed\n";
    for (const auto& c : cells) {
      if (!c.ok()) s.log() << "  " << c.model_id << " / " << c.dataset_id << " / " << condition_name(c.condition)
                           << " / " << c.run_seed << ": " << c.error << '\n';
    }
    return kExitPartial;
  }
  return kExitOk;
}

inline report::ReportOptions report_options(const BenchmarkConfig& cfg) {
  report::ReportOptions o;
  o.transformations = cfg.transformations;
  o.min_datasets = cfg.min_datasets;
  o.n_splits = cfg.splits;
  o.seed = cfg.seed;
  return o;
}

inline report::ReportBundle load_bundle(Session& s, bool& had_failures) {
  const auto cells = read_scores(s.config().scores_file());
  if (cells.empty()) throw Error(Errc::kEmptyInput, s.config().scores_file().string() + " has no score cells");
  had_failures = std::any_of(cells.begin(), cells.end(), [](const ScoreCell& c) { return !c.ok(); });
  return report::build_report(cells, report_options(s.config()));
}

inline void print_stats(std::ostream& out, const report::ReportBundle& b) {
  if (!b.stats) {
    out << "no statistics (see warnings)\n";
    return;
  }
  out << "transformation\taxis\tHL shift\t95% CI\tp (Holm)\tmedian |delta|\tn\n";
  for (const auto& t : b.stats->transformations) {
    char p[32];
    std::snprintf(p, sizeof p, "%.4g", t.p_holm);
    out << name_of(t.transformation) << '\t' << name_of(axis_of(t.transformation)) << '\t'
        << report::fixed2(t.hl_shift) << "\t[" << report::fixed2(t.ci_low) << ", " << report::fixed2(t.ci_high)
        << "]\t" << (t.p_holm < 0.001 ? std::string("<.001") : std::string(p)) << '\t'
        << report::fixed2(t.median_abs_delta) << '\t' << t.n << '\n';
  }
}

inline void print_warnings(std::ostream& log, const report::ReportBundle& b) {
  for (const auto& w : b.warnings) log << "warning: " << w << '\n';
}

inline int cmd_stats(Session& s) {
  bool had_failures = false;
  const auto b = load_bundle(s, had_failures);
  report::emit_report(b, s.config().report_dir());
  print_warnings(s.log(), b);
  print_stats(s.out(), b);
  return had_failures ? kExitPartial : kExitOk;
}

inline int cmd_report(Session& s) {
  bool had_failures = false;
  const auto b = load_bundle(s, had_failures);
  report::emit_report(b, s.config().report_dir());
  print_warnings(s.log(), b);
  s.out() << report::render_headline(b.models);
  s.log() << "report written to " << s.config().report_dir().string() << '\n';
  return had_failures ? kExitPartial : kExitOk;
}

/// Error report per candidate on the probe set, shortlist by total error,
/// judge crossover among the shortlist and pairwise bootstrap comparisons.
inline int cmd_select_model(Session& s) {
  const auto& cfg = s.config();
  if (cfg.candidates.size() < 2) throw Error(Errc::kConfig, "select-model needs at least two candidates");
  if (!cfg.probe_dataset) throw Error(Errc::kConfig, "select-model needs probe_dataset");
  const auto probe = data::load_dataset(cfg.resolve(*cfg.probe_dataset));
  auto slots = data::text_slots(probe);
  std::erase_if(slots, [](const data::TextSlot& x) { return x.text.empty(); });
  if (cfg.probe_limit > 0 && slots.size() > cfg.probe_limit) slots.resize(cfg.probe_limit);
  if (slots.empty()) throw Error(Errc::kEmptyInput, "probe dataset has no texts");
  auto& gw = s.gateway();
  const auto seed = cfg.run_seeds.front();

  struct Job {
    std::size_t candidate, transformation, slot;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cfg.candidates.size(); ++c) {
    for (std::size_t t = 0; t < cfg.transformations.size(); ++t) {
      for (std::size_t i = 0; i < slots.size(); ++i) jobs.push_back({c, t, i});
    }
  }
  const auto records = gateway::parallel_map<transform::TransformRecord>(jobs.size(), gw.parallelism(), [&](std::size_t k) {
    const auto& job = jobs[k];
    const auto& slot = slots[job.slot];
    const auto t = cfg.transformations[job.transformation];
    transform::RunConfig rc;
    rc.run_seed = seed;
    rc.generator_id = cfg.candidates[job.candidate];
    const transform::DrawSite site{probe.id, std::string(name_of(t)), slot.item_index, slot.field};
    return transform::apply_transformation(slot.text, slot.source, transform::spec_of(t), rc, site, gw, slot.item_id);
  });

  const HeuristicLanguageIdentifier lang_id;
  std::vector<std::vector<qc::ErrorFlags>> flags(cfg.candidates.size());
  std::size_t failures = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (records[k].failed()) {
      ++failures;
      continue;
    }
    flags[jobs[k].candidate].push_back(flags_of(records[k], lang_id));
  }
  if (failures == jobs.size()) throw Error(Errc::kTransport, "every probe transformation failed");
  std::string rep = error_report_header();
  std::vector<std::pair<std::string, double>> totals;
  for (std::size_t c = 0; c < cfg.candidates.size(); ++c) {
    if (flags[c].empty()) {
      s.log() << "warning: " << cfg.candidates[c] << " produced no outputs; not shortlisted\n";
      continue;
    }
    const auto r = qc::error_report(flags[c]);
    rep += error_report_row(cfg.candidates[c], r);
    totals.emplace_back(cfg.candidates[c], r.total_percent);
  }
  write_atomically(cfg.select_dir() / "error_report.csv", rep);

  const auto short_list = qc::shortlist(totals, cfg.shortlist_size);
  if (short_list.size() < 2) throw Error(Errc::kConfig, "shortlist has fewer than two generators");
  s.out() << "shortlist:";
  for (const auto& g : short_list) s.out() << ' ' << g;
  s.out() << '\n';

  // One judge sample per (probe text, transformation) with every
  // shortlisted generator's output.
  std::map<std::pair<std::size_t, std::size_t>, qc::JudgeSample> samples;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& job = jobs[k];
    const auto& name = cfg.candidates[job.candidate];
    if (std::find(short_list.begin(), short_list.end(), name) == short_list.end()) continue;
    auto& js = samples[{job.slot, job.transformation}];
    js.sample_id = slots[job.slot].field + "#" + std::to_string(slots[job.slot].item_index);
    js.transformation = cfg.transformations[job.transformation];
    js.original = slots[job.slot].text;
    js.outputs[name] = records[k].final_text;
  }
  std::vector<qc::JudgeSample> judge_samples;
  for (auto& [key, js] : samples) judge_samples.push_back(std::move(js));
  const auto matrix = qc::judge_crossover(short_list, short_list, judge_samples, gw);
  const auto cmp = qc::compare_generators(matrix, cfg.judge_resamples, cfg.seed);

  std::ostringstream m;
  m << "judge";
  for (const auto& g : matrix.generators) m << ',' << csv_field(g);
  m << '\n';
  for (const auto& j : matrix.judges) {
    m << csv_field(j);
    for (const auto& g : matrix.generators) m << ',' << report::fixed2(matrix.cell(j, g).mean_score);
    m << '\n';
  }
  m << "average";
  for (const auto& g : matrix.generators) m << ',' << report::fixed2(matrix.column_mean(g));
  m << '\n';
  write_atomically(cfg.select_dir() / "judge_matrix.csv", m.str());

  json cj = {{"winner", cmp.winner}, {"unparseable", matrix.unparseable}, {"generators", json::array()},
             {"pairs", json::array()}};
  for (const auto& g : cmp.generators) {
    cj["generators"].push_back({{"generator", g.generator},
                                {"mean", report::round3(g.mean)},
                                {"ci", {report::round3(g.ci.low), report::round3(g.ci.high)}}});
  }
  for (const auto& p : cmp.pairs) {
    cj["pairs"].push_back({{"a", p.a},
                           {"b", p.b},
                           {"mean_difference", report::round3(p.mean_difference)},
                           {"p_raw", p.p_raw},
                           {"p_holm", p.p_holm}});
  }
  write_atomically(cfg.select_dir() / "comparison.json", cj.dump(2) + "\n");

  for (const auto& p : cmp.pairs) {
    if (p.a != cmp.winner && p.b != cmp.winner) continue;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", p.p_holm);
    s.out() << p.a << " vs " << p.b << ": difference " << report::fixed2(p.mean_difference) << ", p (Holm) "
            << (p.p_holm < 0.001 ? std::string("<.001") : std::string(buf)) << '\n';
  }
  s.out() << "winner: " << cmp.winner << '\n';
  return failures > 0 ? kExitPartial : kExitOk;
}

/// transform, evaluate, then stats and report in one go.
inline int cmd_all(Session& s) {
  int code = kExitOk;
  if (!s.original_only()) code = std::max(code, cmd_transform(s));
  code = std::max(code, cmd_evaluate(s));
  code = std::max(code, cmd_report(s));
  return code;
}

/// Runs `command` and maps library errors to exit codes. Anything that stops
/// a command is fatal (1); partial failures are reported by the command (2).
template <class F>
int run_guarded(std::ostream& log, F&& command) {
  try {
    return command();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

}  // namespace hteb::cli
