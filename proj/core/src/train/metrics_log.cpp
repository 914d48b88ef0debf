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

#include "wavelatent/train/metrics_log.hpp"

#include <nlohmann/json.hpp>

#include "wavelatent/errors.hpp"

namespace wavelatent::train {

MetricsLog::MetricsLog(const std::filesystem::path& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw IoError("cannot open metrics log: " + path.string());
}

void MetricsLog::write(std::int64_t step, const std::string& name, double value) {
  nlohmann::json record{{"step", step}, {"loss", name}, {"value", value}};
  out_ << record.dump() << '\n';
}

void MetricsLog::flush() { out_.flush(); }

}  // namespace wavelatent::train
