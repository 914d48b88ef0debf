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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

namespace wavelatent::train {

/// Newline-delimited JSON records {"step": s, "loss": name, "value": v}.
class MetricsLog {
 public:
  explicit MetricsLog(const std::filesystem::path& path, bool append = false);

  void write(std::int64_t step, const std::string& name, double value);
  void flush();

 private:
  std::ofstream out_;
};

}  // namespace wavelatent::train
