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

#include "wavelatent/signal/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "wavelatent/errors.hpp"

namespace wavelatent::signal {

void validate(const Waveform& w) {
  if (w.sample_rate <= 0) throw ArgumentError("waveform sample rate must be positive");
  if (w.samples.empty()) throw ArgumentError("waveform is empty");
  for (float s : w.samples) {
    if (!std::isfinite(s)) throw ArgumentError("waveform contains non-finite samples");
    if (std::abs(s) > 1.0f) throw ArgumentError("waveform sample exceeds unit amplitude");
  }
}

Waveform peak_normalize(Waveform w, float peak) {
  float max_abs = 0.0f;
  for (float s : w.samples) max_abs = std::max(max_abs, std::abs(s));
  if (max_abs <= 0.0f) return w;
  const float gain = peak / max_abs;
  for (float& s : w.samples) s *= gain;
  return w;
}

torch::Tensor to_tensor(const Waveform& w) {
  return torch::from_blob(const_cast<float*>(w.samples.data()),
                          {static_cast<std::int64_t>(w.samples.size())}, torch::kFloat32)
      .clone();
}

Waveform from_tensor(const torch::Tensor& samples, int sample_rate) {
  auto flat = samples.detach().to(torch::kCPU, torch::kFloat32).contiguous().reshape({-1});
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(flat.data_ptr<float>(), flat.data_ptr<float>() + flat.numel());
  return w;
}

}  // namespace wavelatent::signal
