// Copyright 2026 The wavelatent Authors
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

#include "wavelatent/pipeline/manifest.hpp"

#include <fstream>
#include <set>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest: " + path.string());
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  Manifest out;
  std::set<std::string> seen;
  std::size_t number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto bar = text.find('|');
    ManifestRow row;
    row.line = number;
    row.audio = trim(text.substr(0, bar));
    if (bar != std::string::npos) row.transcript = trim(text.substr(bar + 1));
    if (row.audio.empty()) {
      out.warnings.push_back("line " + std::to_string(number) + ": no audio path");
      continue;
    }
    if (row.audio.is_relative()) row.audio = (base / row.audio).lexically_normal();
    row.id = row.audio.stem().string();
    if (!seen.insert(row.id).second) {
      out.warnings.push_back("line " + std::to_string(number) + ": duplicate id '" + row.id + "'");
      continue;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace wavelatent::pipeline
