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

#include <filesystem>
#include <string>

#include <torch/torch.h>

namespace wavelatent::train {

/// Writes the archive to a sibling temporary file and renames it over
/// `path`, so readers never observe a partially written checkpoint.
void save_archive_atomically(torch::serialize::OutputArchive& archive,
                             const std::filesystem::path& path);

void write_string(torch::serialize::OutputArchive& archive, const std::string& key,
                  const std::string& value);
std::string read_string(torch::serialize::InputArchive& archive, const std::string& key);
bool try_read_string(torch::serialize::InputArchive& archive, const std::string& key,
                     std::string& value);

void write_int(torch::serialize::OutputArchive& archive, const std::string& key, std::int64_t value);
std::int64_t read_int(torch::serialize::InputArchive& archive, const std::string& key);

/// Loads `path`, throwing IoError if unreadable and VersionError unless its
/// "schema" entry equals `expected_schema`.
void open_checkpoint(torch::serialize::InputArchive& archive, const std::filesystem::path& path,
                     const std::string& expected_schema);

}  // namespace wavelatent::train
