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

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace wavelatent::pipeline {

struct ManifestRow {
  std::size_t line = 0;           // 1-based line in the manifest
  std::string id;                 // audio file stem
  std::filesystem::path audio;    // resolved against the manifest directory
  std::string transcript;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::vector<std::string> warnings;  // malformed or duplicate lines, skipped
};

/// Reads "audio_path|transcript" lines. Blank lines and lines starting with
/// '#' are ignored; a missing transcript is allowed (empty). Throws IoError
/// when the manifest itself is unreadable.
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace wavelatent::pipeline
