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

#pragma once

#include "crackfreq/fem.hpp"
#include "crackfreq/frequency_analysis.hpp"
#include "crackfreq/straightening.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crackfreq
{

#ifndef CRACKFREQ_VERSION
#define CRACKFREQ_VERSION "0.1.0"
#endif

inline constexpr const char * kToolVersion = CRACKFREQ_VERSION;

struct RunConfig
{
  CrackSpec crack;
  PotentialSpec potential;
  std::string boundary_data = "sqrt_rho_sin_half";
  double r = 0.5;
  double h = 0.05;
  double grading = 0.5;
  double inner_fraction = 1.0 / 256.0;
  double reference_h = 0.1;
  std::vector<double> radii;
  std::vector<double> lambdas;
  std::vector<double> fourier_lambdas;
  std::vector<double> fourier_R;
  double h_sphere = 0.05;
  int eigen_count = 6;
  std::vector<std::string> audits;
  std::vector<double> audit_radii;
  std::vector<double> probe_radii;
  std::vector<int> approx_n;
  double alpha = 2.0;
  std::uint64_t seed = 1;
  std::string output_dir = "crackfreq_out";
  // Whitespace-stripped, key-sorted config text.
  std::string canonical;
};

// Thrown for unparsable or invalid configs; one diagnostic per offending line or field.
class ConfigError : public Error
{
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string> & diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

RunConfig parse_config(const std::string & text);
RunConfig load_config(const std::string & path);
std::string canonicalize_config(const std::string & text);
std::uint64_t config_hash(const std::string & text);

// Closed-form fields by name: sqrt_rho_sin_half, x3, x1_sqrt_rho_sin_half, one.
PointFunction closed_form_field(const std::string & name);

// CSV "r,H,D,N" at path plus a JSON sidecar {"ell","k0","eps_bar"} next to it.
void emit_profile(const RadialProfile & profile, const std::string & path);

struct Check
{
  std::string name;
  bool pass = false;
  std::string detail;
  int criterion = 0;  // acceptance criterion number, 0 when not tied to one
};

struct ManifestFile
{
  std::string name;
  std::uint64_t checksum = 0;
  std::uintmax_t bytes = 0;
};

struct RunManifest
{
  std::string subcommand;
  std::string config_hash;
  std::string version = kToolVersion;
  double r0 = 0.0;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<ManifestFile> files;
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool pass() const;
};

std::string manifest_json(const RunManifest & manifest);

struct RunOptions
{
  std::string output_dir;  // overrides the config when non-empty
  int threads = 1;
  std::int64_t seed = -1;  // overrides the config when >= 0
  double tolerance_scale = 1.0;
};

struct RunResult
{
  int exit_code = 0;
  std::string output_dir;
  RunManifest manifest;
};

const std::vector<std::string> & subcommands();

// Runs one pipeline and writes its artifacts atomically. Errors are reported on stderr and
// mapped to exit 2 (config) or 1 (numerical failure or failed checks).
RunResult run(const std::string & subcommand, const RunConfig & config, const RunOptions & options);
RunResult run(const std::string & subcommand, const std::string & config_path, const RunOptions & options);

}  // namespace crackfreq
