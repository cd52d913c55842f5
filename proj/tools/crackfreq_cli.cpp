// Copyright 2026 The crackfreq Authors
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

#include "crackfreq/cli_reporting.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

int main(int argc, char ** argv)
{
  CLI::App app{"Frequency analysis for elliptic problems on cracked domains"};
  app.set_version_flag("--version", std::string(crackfreq::kToolVersion));

  std::string subcommand;
  std::string config;
  crackfreq::RunOptions options;
  app.add_option("subcommand", subcommand, "Pipeline to run")
    ->required()
    ->check(CLI::IsMember(crackfreq::subcommands()));
  app.add_option("--config", config, "Run configuration (JSON)")->required();
  app.add_option("--output", options.output_dir, "Output directory (overrides output_dir)");
  app.add_option("--threads", options.threads, "Thread count")->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Seed (overrides the config)")->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance-scale", options.tolerance_scale, "Multiplies every audit tolerance")
    ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const crackfreq::RunResult result = crackfreq::run(subcommand, config, options);
  if (result.exit_code == 0) std::printf("%s\n", result.output_dir.c_str());
  return result.exit_code;
}
