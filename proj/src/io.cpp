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

#include "crackfreq/io.hpp"

#include "crackfreq/common.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace crackfreq
{

std::uint64_t fnv1a64(const void * data, std::size_t size, std::uint64_t seed)
{
  const auto * bytes = static_cast<const unsigned char *>(data);
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t fnv1a64(const std::string & text) { return fnv1a64(text.data(), text.size()); }

std::string hex64(std::uint64_t value)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_text_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_csv(const CsvTable & table)
{
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out += (c ? "," : "") + table.header[c];
  }
  out += "\n";
  for (const auto & row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += format_double(row[c]);
    }
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string & text)
{
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto & c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception &) {
        throw Error(ErrorKind::io, "non-numeric CSV cell '" + c + "'");
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace crackfreq
