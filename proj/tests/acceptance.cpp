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
#include "crackfreq/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using crackfreq::Check;
using crackfreq::RunResult;

namespace
{

RunResult timed_verify(const std::string & config, const std::string & out, double & seconds)
{
  crackfreq::RunOptions o;
  o.output_dir = out;
  o.threads = 1;
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = crackfreq::run("verify", config, o);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::map<std::string, std::string> artifacts(const fs::path & dir)
{
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto & e : fs::directory_iterator(dir)) {
    const std::string ext = e.path().extension().string();
    if (ext == ".csv" || ext == ".json") out[e.path().filename().string()] = crackfreq::read_text_file(e.path().string());
  }
  return out;
}

}  // namespace

int main(int argc, char ** argv)
{
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::string config = argc > 1 ? argv[1] : CRACKFREQ_SOURCE_DIR "/configs/flagship.json";
  const fs::path base = argc > 2 ? fs::path(argv[2]) : fs::current_path() / "acceptance_out";
  fs::remove_all(base);

  double t1 = 0.0;
  double t2 = 0.0;
  const RunResult first = timed_verify(config, (base / "run1").string(), t1);
  std::printf("verify run 1: exit %d, %.0f s\n", first.exit_code, t1);

  std::map<int, std::vector<const Check *>> by_criterion;
  for (const Check & c : first.manifest.checks) {
    if (c.criterion > 0) by_criterion[c.criterion].push_back(&c);
  }

  int failures = 0;
  for (int k = 1; k <= 8; ++k) {
    const auto & checks = by_criterion[k];
    bool ok = !checks.empty();
    std::string detail;
    for (const Check * c : checks) {
      if (!c->pass) {
        ok = false;
        detail += " " + c->name + " (" + c->detail + ");";
      }
    }
    if (checks.empty()) detail = " no checks recorded";
    std::printf("criterion %d: %s (%zu checks)%s\n", k, ok ? "PASS" : "FAIL", checks.size(), detail.c_str());
    failures += ok ? 0 : 1;
  }

  const RunResult second = timed_verify(config, (base / "run2").string(), t2);
  std::printf("verify run 2: exit %d, %.0f s\n", second.exit_code, t2);
  const auto a = artifacts(base / "run1");
  const auto b = artifacts(base / "run2");
  std::vector<std::string> differing;
  for (const auto & [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) differing.push_back(name);
  }
  for (const auto & [name, bytes] : b) {
    if (!a.count(name)) differing.push_back(name);
  }
  const bool det = !a.empty() && differing.empty();
  std::printf("criterion 9: %s (%zu artifacts compared)", det ? "PASS" : "FAIL", a.size());
  for (const auto & n : differing) std::printf(" %s", n.c_str());
  std::printf("\n");
  failures += det ? 0 : 1;

  std::printf("acceptance: %s\n", failures == 0 ? "PASS" : "FAIL");
  return failures == 0 ? 0 : 1;
}
