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

#include <cstdint>
#include <string>
#include <vector>

namespace crackfreq
{

// 64-bit FNV-1a.
std::uint64_t fnv1a64(const void * data, std::size_t size, std::uint64_t seed = 14695981039346656037ull);
std::uint64_t fnv1a64(const std::string & text);
std::string hex64(std::uint64_t value);

// Decimal with 17 significant digits.
std::string format_double(double value);

void write_text_file(const std::string & path, const std::string & text);
std::string read_text_file(const std::string & path);

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable & table);
CsvTable parse_csv(const std::string & text);

}  // namespace crackfreq
