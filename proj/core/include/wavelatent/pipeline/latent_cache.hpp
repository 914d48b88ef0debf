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
#include <string>
#include <vector>

#include <torch/torch.h>

#include "wavelatent/flow/acoustic_model.hpp"
#include "wavelatent/pipeline/dataset.hpp"
#include "wavelatent/wavegan/model.hpp"

namespace wavelatent::pipeline {

/// Posterior statistics of one utterance.
struct LatentEntry {
  std::string id;
  torch::Tensor mu;         // [C, frames] float32
  torch::Tensor log_sigma;  // [C, frames] float32
  std::vector<std::int64_t> tokens;

  std::int64_t frames() const { return mu.size(1); }
};

/// Binary entry file: magic "WLAT", u32 version, u32 channels, u32 frames,
/// then mu and log_sigma as little-endian float32, channel-major.
void write_latent_entry(const std::filesystem::path& path, const LatentEntry& entry);
LatentEntry read_latent_entry(const std::filesystem::path& path);

/// Encodes every dataset utterance and writes <id>.lat files plus an
/// index.jsonl ({"id", "file", "frames", "channels", "tokens"}) to `dir`.
/// Re-running with the same inputs rewrites byte-identical files.
std::size_t extract_latent_stats(wavegan::WaveGan& model, const Dataset& dataset,
                                 const std::filesystem::path& dir);

/// Reads the index and every entry it names, in index order.
std::vector<LatentEntry> load_latent_cache(const std::filesystem::path& dir);

std::vector<flow::AcousticExample> to_acoustic_examples(const std::vector<LatentEntry>& entries);

}  // namespace wavelatent::pipeline
