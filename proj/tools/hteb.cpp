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

#include <CLI11.hpp>

#include <iostream>

#include "hteb/cli/commands.hpp"
#include "hteb/cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robustness benchmark for text-embedding models"};
  app.require_subcommand(1);

  std::string config_path;
  hteb::cli::Overrides overrides;
  std::string mock_dir, output_dir;
  std::size_t parallelism = 0;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(hteb::cli::Session&);
  };
  const Entry entries[] = {
      {"select-model", "Compare candidate generators and pick one", hteb::cli::cmd_select_model},
      {"transform", "Generate transformed datasets", hteb::cli::cmd_transform},
      {"evaluate", "Score embedding models on original and transformed data", hteb::cli::cmd_evaluate},
      {"stats", "Per-transformation inference from scores.csv", hteb::cli::cmd_stats},
      {"report", "Write the report bundle and print the headline table", hteb::cli::cmd_report},
      {"all", "transform, evaluate and report", hteb::cli::cmd_all},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "Benchmark config (TOML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", overrides.seeds, "Run seed; repeat for several runs");
    sub->add_option("--mock", mock_dir, "Offline fixture directory instead of live endpoints");
    sub->add_option("--output", output_dir, "Output directory");
    sub->add_option("--parallelism", parallelism, "In-flight gateway requests")->check(CLI::PositiveNumber);
    if (std::string(e.name) == "evaluate" || std::string(e.name) == "all") {
      sub->add_flag("--original-only", overrides.original_only, "Score the untransformed data only");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hteb::cli::kExitFatal;
  }

  const auto& chosen = app.get_subcommands().front()->get_name();
  return hteb::cli::run_guarded(std::cerr, [&] {
    auto cfg = hteb::cli::load_config(config_path);
    if (!mock_dir.empty()) overrides.mock_dir = mock_dir;
    if (!output_dir.empty()) overrides.output_dir = output_dir;
    if (parallelism > 0) overrides.parallelism = parallelism;
    hteb::cli::apply(cfg, overrides);
    cfg.validate();
    hteb::cli::Session session(cfg, overrides.original_only);
    for (const auto& e : entries) {
      if (chosen == e.name) return e.run(session);
    }
    return static_cast<int>(hteb::cli::kExitFatal);
  });
}
