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

#include "wavelatent/train/checkpoint.hpp"

#include <system_error>

#include "wavelatent/errors.hpp"

namespace wavelatent::train {

void save_archive_atomically(torch::serialize::OutputArchive& archive,
                             const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  try {
    archive.save_to(tmp.string());
  } catch (const c10::Error& e) {
    throw IoError("cannot write checkpoint " + tmp.string() + ": " + e.what_without_backtrace());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place: " + path.string() + ": " + ec.message());
}

void write_string(torch::serialize::OutputArchive& archive, const std::string& key,
                  const std::string& value) {
  archive.write(key, c10::IValue(value));
}

std::string read_string(torch::serialize::InputArchive& archive, const std::string& key) {
  std::string value;
  if (!try_read_string(archive, key, value)) throw FormatError("checkpoint is missing '" + key + "'");
  return value;
}

bool try_read_string(torch::serialize::InputArchive& archive, const std::string& key,
                     std::string& value) {
  c10::IValue v;
  if (!archive.try_read(key, v) || !v.isString()) return false;
  value = v.toStringRef();
  return true;
}

void write_int(torch::serialize::OutputArchive& archive, const std::string& key, std::int64_t value) {
  archive.write(key, c10::IValue(value));
}

std::int64_t read_int(torch::serialize::InputArchive& archive, const std::string& key) {
  c10::IValue v;
  if (!archive.try_read(key, v) || !v.isInt()) throw FormatError("checkpoint is missing '" + key + "'");
  return v.toInt();
}

void open_checkpoint(torch::serialize::InputArchive& archive, const std::filesystem::path& path,
                     const std::string& expected_schema) {
  if (!std::filesystem::exists(path)) throw IoError("checkpoint not found: " + path.string());
  try {
    archive.load_from(path.string());
  } catch (const c10::Error& e) {
    throw IoError("cannot read checkpoint " + path.string() + ": " + e.what_without_backtrace());
  }
  std::string schema;
  if (!try_read_string(archive, "schema", schema) || schema != expected_schema) {
    throw VersionError("checkpoint " + path.string() + " has schema '" + schema + "', expected '" +
                       expected_schema + "'");
  }
}

}  // namespace wavelatent::train
