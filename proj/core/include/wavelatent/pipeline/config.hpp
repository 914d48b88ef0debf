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

#include <nlohmann/json.hpp>

#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/spectral.hpp"
#include "wavelatent/train/acoustic_trainer.hpp"
#include "wavelatent/train/wavegan_trainer.hpp"

namespace wavelatent::pipeline {

inline constexpr const char* kConfigSchema = "wavelatent.config/1";

/// Everything a pipeline command needs. Stored as JSON; relative paths are
/// resolved against the directory holding the config file.
struct PipelineConfig {
  int sample_rate = 22050;
  std::filesystem::path manifest;       // training rows "audio|transcript"
  std::filesystem::path eval_manifest;  // held-out rows; empty reuses the training data
  std::filesystem::path work_dir = "work";
  std::filesystem::path vocabulary;     // empty selects the bundled phone set
  std::uint64_t seed = 1234;            // overrides the trainer seeds
  signal::PitchConfig pitch;
  train::WaveGanTrainerConfig wavegan;
  train::AcousticTrainerConfig acoustic;
  std::int64_t wavegan_steps = 20000;
  std::int64_t acoustic_steps = 10000;
  std::int64_t checkpoint_interval = 1000;
  double temperature = 0.667;
  signal::MelConfig eval_mel{{1024, 256, 1024, signal::WindowKind::kHann}, 80, 0.0, 0.0};
  int mcd_order = 24;

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;

  /// Copies the shared settings (seed, sample rate) into the trainer configs.
  void propagate();

  std::filesystem::path data_dir() const { return work_dir / "data"; }
  std::filesystem::path latent_dir() const { return work_dir / "latents"; }
  std::filesystem::path wavegan_checkpoint() const { return work_dir / "wavegan.ckpt"; }
  std::filesystem::path acoustic_checkpoint() const { return work_dir / "acoustic.ckpt"; }
  std::filesystem::path runs_dir() const { return work_dir / "runs"; }
};

/// Parses a config file. Throws IoError if unreadable, FormatError on
/// malformed JSON and VersionError on a missing or foreign schema tag.
PipelineConfig load_config(const std::filesystem::path& path);

/// Writes `cfg` with its schema tag; paths are written as given.
void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);

void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);

}  // namespace wavelatent::pipeline
