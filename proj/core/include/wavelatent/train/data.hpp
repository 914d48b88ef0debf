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
#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/spectral.hpp"

namespace wavelatent::train {

/// One utterance held in memory for training.
struct TrainingUtterance {
  std::string id;
  torch::Tensor audio;  // [T] float32
  signal::PitchTrack pitch;
  std::vector<std::int64_t> tokens;
};

struct TrainingBatch {
  torch::Tensor audio;    // [B, S]
  torch::Tensor log_f0;   // [B, S / hop]
  torch::Tensor voiced;   // [B, S / hop] bool
  torch::Tensor mel;      // [B, n_mels, S / hop]; only for mel-conditioned training
};

/// Visits items in a fresh random order every epoch, `batch_size` at a time.
/// The final batch of an epoch wraps into the next permutation.
class EpochSampler {
 public:
  EpochSampler(std::size_t items, std::size_t batch_size, std::uint64_t seed);

  std::vector<std::size_t> next();
  std::size_t steps_per_epoch() const;
  std::uint64_t epoch() const { return epoch_; }

  std::string state() const;
  void restore(const std::string& state);

 private:
  void reshuffle();

  std::size_t items_;
  std::size_t batch_size_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::uint64_t epoch_ = 0;
};

/// Crops fixed-length training segments. Crop offsets are multiples of the
/// hop so that pitch frames stay aligned with latent frames; clips shorter
/// than a segment are zero-padded (padding is unvoiced).
class SegmentSampler {
 public:
  SegmentSampler(const std::vector<TrainingUtterance>& corpus, int segment_samples, int hop_size,
                 std::size_t batch_size, std::uint64_t seed);

  TrainingBatch next();

  /// Adds log-mel conditioning frames (one per hop) to each batch.
  void enable_mel(int sample_rate, const signal::MelConfig& mel);

  std::size_t steps_per_epoch() const { return order_.steps_per_epoch(); }
  std::uint64_t epoch() const { return order_.epoch(); }
  std::string state() const;
  void restore(const std::string& state);

 private:
  const std::vector<TrainingUtterance>* corpus_;
  int segment_;
  int hop_;
  EpochSampler order_;
  std::mt19937_64 crop_rng_;
  bool with_mel_ = false;
  signal::MelConfig mel_;
  torch::Tensor filterbank_;
};

/// Log-mel frames [n_mels, S / hop] aligned one-to-one with hop-sized
/// blocks of `audio` ([S], S a multiple of hop).
torch::Tensor conditioning_mel(const torch::Tensor& audio, const torch::Tensor& filterbank,
                               const signal::MelConfig& mel);

}  // namespace wavelatent::train
