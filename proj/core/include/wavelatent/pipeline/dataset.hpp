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

#include "wavelatent/pipeline/config.hpp"
#include "wavelatent/pipeline/tokenizer.hpp"
#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/waveform.hpp"
#include "wavelatent/train/data.hpp"

namespace wavelatent::pipeline {

struct UtteranceRecord {
  std::string id;
  std::string transcript;
  std::vector<std::string> phonemes;
  std::vector<std::int64_t> tokens;
  std::int64_t samples = 0;
  int sample_rate = 0;
};

struct DatasetSummary {
  std::size_t rows = 0;
  std::size_t processed = 0;
  std::size_t skipped = 0;
  double total_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// A prepared dataset directory: audio/<id>.wav (float32), pitch/<id>.json
/// and an index dataset.jsonl in id order.
class Dataset {
 public:
  static Dataset open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const std::vector<UtteranceRecord>& utterances() const { return utterances_; }
  std::size_t size() const { return utterances_.size(); }

  std::filesystem::path audio_path(const UtteranceRecord& r) const;
  std::filesystem::path pitch_path(const UtteranceRecord& r) const;
  signal::Waveform load_audio(const UtteranceRecord& r) const;
  signal::PitchTrack load_pitch(const UtteranceRecord& r) const;

  /// Audio, pitch and tokens of every utterance, in index order.
  std::vector<train::TrainingUtterance> training_corpus() const;

 private:
  std::filesystem::path root_;
  std::vector<UtteranceRecord> utterances_;
};

/// Resamples to the configured rate, peak-normalizes, tracks pitch at the
/// latent hop and tokenizes each manifest row into `cfg.data_dir()`. Rows
/// with unreadable audio or unusable transcripts are skipped and reported.
DatasetSummary prepare_data(const PipelineConfig& cfg, const Tokenizer& tokenizer,
                            const Vocabulary& vocab);

/// Loads, resamples and peak-normalizes one file to `sample_rate`.
signal::Waveform ingest_audio(const std::filesystem::path& path, int sample_rate);

void save_pitch(const std::filesystem::path& path, const signal::PitchTrack& track);
signal::PitchTrack load_pitch(const std::filesystem::path& path);

}  // namespace wavelatent::pipeline
