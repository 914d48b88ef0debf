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

#include <cstddef>
#include <vector>

#include <torch/torch.h>

namespace wavelatent::signal {

/// Mono audio: amplitudes nominally in [-1, 1] at a positive integer rate.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Throws ArgumentError unless the waveform is non-empty, finite, bounded by
/// 1.0 in magnitude, and has a positive sample rate.
void validate(const Waveform& w);

/// Scales so that max |sample| == peak. Silent input is returned unchanged.
Waveform peak_normalize(Waveform w, float peak = 0.95f);

// 1-D float32 tensor view (copy) of the samples.
torch::Tensor to_tensor(const Waveform& w);
Waveform from_tensor(const torch::Tensor& samples, int sample_rate);

}  // namespace wavelatent::signal
