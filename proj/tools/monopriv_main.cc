// Copyright 2026 The monopriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// monopriv: run verification configs, canned demos and the distance
// calculator.
//
//   monopriv run <config.json> [--seed N] [--mass-tol T] [--out PREFIX]
//   monopriv demo <name>
//   monopriv dist --epsilon E [--shift1 A] [--shift2 B] [--mass-tol T]
//   monopriv version

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_join.h"
#include "monopriv/config.h"
#include "monopriv/report.h"
#include "monopriv/runner.h"

namespace {

constexpr char kVersion[] = "monopriv 1.0.0";

int RunOne(const monopriv::RunConfig& config) {
  absl::StatusOr<monopriv::RunResult> result = monopriv::Run(config);
  if (!result.ok()) {
    std::cerr << "error: " << result.status().message() << "\n";
    return monopriv::kExitConfigError;
  }
  std::cout << monopriv::RenderSummary(config, *result);
  if (absl::Status s = monopriv::WriteOutputs(config, result->report);
      !s.ok()) {
    std::cerr << "error: " << s.message() << "\n";
    return monopriv::kExitConfigError;
  }
  return result->report.ExitCode();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of private data-purchase mechanisms"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<double> mass_tol;
  std::string out_prefix;
  CLI::App* run = app.add_subcommand("run", "Execute a config file");
  run->add_option("config", config_path, "JSON config")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--mass-tol", mass_tol, "Override the truncation tolerance");
  run->add_option("--out", out_prefix,
                  "Write PREFIX.csv and PREFIX.json reports");

  std::string demo_name;
  CLI::App* demo = app.add_subcommand("demo", "Run a canned instantiation");
  demo->add_option("name", demo_name,
                   absl::StrJoin(monopriv::DemoNames(), ", "))
      ->required();

  monopriv::DistQuery query;
  CLI::App* dist =
      app.add_subcommand("dist", "Distance between shifted geometric laws");
  dist->add_option("--epsilon", query.epsilon, "Noise parameter")->required();
  dist->add_option("--shift1", query.shift1, "First shift");
  dist->add_option("--shift2", query.shift2, "Second shift");
  dist->add_option("--mass-tol", query.mass_tol, "Truncation tolerance");

  CLI::App* version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : monopriv::kExitConfigError;
  }

  if (*version) {
    std::cout << kVersion << "\n";
    return 0;
  }
  if (*dist) {
    absl::StatusOr<std::string> text = monopriv::DistCalculator(query);
    if (!text.ok()) {
      std::cerr << "error: " << text.status().message() << "\n";
      return monopriv::kExitConfigError;
    }
    std::cout << *text;
    return 0;
  }
  if (*demo) {
    absl::StatusOr<std::vector<monopriv::RunConfig>> configs =
        monopriv::DemoConfigs(demo_name);
    if (!configs.ok()) {
      std::cerr << "error: " << configs.status().message() << "\n";
      return monopriv::kExitConfigError;
    }
    int worst = 0;
    for (size_t k = 0; k < configs->size(); ++k) {
      if (k > 0) std::cout << "\n";
      const int code = RunOne((*configs)[k]);
      if (code == monopriv::kExitConfigError) return code;
      if (code == 1 || (code == 2 && worst == 0)) worst = code;
    }
    return worst;
  }

  monopriv::ConfigOverrides overrides;
  overrides.seed = seed;
  overrides.mass_tol = mass_tol;
  if (!out_prefix.empty()) overrides.out_prefix = out_prefix;
  absl::StatusOr<monopriv::RunConfig> config =
      monopriv::LoadConfigFile(config_path, overrides);
  if (!config.ok()) {
    std::cerr << config.status().message() << "\n";
    return monopriv::kExitConfigError;
  }
  return RunOne(*config);
}
