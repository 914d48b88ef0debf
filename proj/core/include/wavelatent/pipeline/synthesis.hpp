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
#include <string>
#include <vector>

#include "wavelatent/signal/waveform.hpp"
#include "wavelatent/train/acoustic_trainer.hpp"
#include "wavelatent/train/wavegan_trainer.hpp"

namespace wavelatent::pipeline {

struct SynthesisOutput {
  signal::Waveform audio;  // hop * sum(durations) samples
  std::vector<int> durations;
};

/// Text-token to waveform inference with a trained acoustic model and
/// waveform decoder.
class Synthesizer {
 public:
  /// Throws VersionError when the latent spaces of the two models differ or
  /// the decoder was trained on mel conditioning.
  Synthesizer(train::LoadedAcousticModel acoustic, train::LoadedWaveGan vocoder);

  /// Same tokens, temperature and seed give identical output. Throws
  /// ArgumentError on an empty token sequence.
  SynthesisOutput synthesize(const std::vector<std::int64_t>& tokens, double temperature,
                             std::uint64_t seed);

  int sample_rate() const { return vocoder_.config.sample_rate; }

 private:
  train::LoadedAcousticModel acoustic_;
  train::LoadedWaveGan vocoder_;
};

/// Clamps to [-1, 1] so the waveform survives 16-bit PCM encoding.
signal::Waveform clip_to_unit(signal::Waveform w);

}  // namespace wavelatent::pipeline
