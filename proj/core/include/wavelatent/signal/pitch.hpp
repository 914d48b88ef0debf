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
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/signal/waveform.hpp"

namespace wavelatent::signal {

/// Frame-level log-F0. Frame t summarizes samples [t*hop, (t+1)*hop), the
/// same span as latent frame t of the waveform encoder.
struct PitchTrack {
  std::vector<float> log_f0;
  std::vector<std::uint8_t> voiced;
  int hop_size = 256;

  std::size_t frames() const { return log_f0.size(); }
  std::size_t voiced_count() const;

  // [frames] float32 / bool tensors.
  torch::Tensor log_f0_tensor() const;
  torch::Tensor voicing_tensor() const;
};

struct PitchConfig {
  double fmin = 50.0;
  double fmax = 800.0;
  double window_seconds = 0.025;
  double voicing_threshold = 0.5;
  double silence_rms = 1e-4;
};

/// Normalized-autocorrelation pitch tracker.
///
/// Returns ceil(size / hop_size) frames. Voiced frames hold log F0 in
/// [log fmin, log fmax]; unvoiced frames are filled by linear interpolation
/// between neighbouring voiced frames (held constant past either end, zero
/// when nothing is voiced). A waveform shorter than one analysis window
/// yields an all-unvoiced track.
PitchTrack extract_pitch(const Waveform& w, int hop_size, const PitchConfig& cfg = {});

/// Copy of frames [begin, begin + count).
PitchTrack slice(const PitchTrack& track, std::size_t begin, std::size_t count);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PitchConfig, fmin, fmax, window_seconds,
                                                voicing_threshold, silence_rms)

}  // namespace wavelatent::signal
