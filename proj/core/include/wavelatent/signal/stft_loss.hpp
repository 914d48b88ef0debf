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

#include <vector>

#include <torch/torch.h>

#include "wavelatent/signal/spectral.hpp"

namespace wavelatent::signal {

/// 512/50/240, 1024/120/600 and 2048/240/1200 (fft/hop/window).
std::vector<SpectralConfig> default_stft_resolutions();

struct StftLossTerms {
  torch::Tensor spectral_convergence;  // mean over resolutions
  torch::Tensor log_magnitude;         // mean over resolutions
  torch::Tensor total;                 // spectral_convergence + log_magnitude
};

/// Per resolution: ||S - S_hat||_F / ||S||_F plus mean |log S - log S_hat|,
/// averaged over resolutions. `x` and `x_hat` are [T] or [B, T] of equal shape.
StftLossTerms multi_resolution_stft_terms(const torch::Tensor& x, const torch::Tensor& x_hat,
                                          const std::vector<SpectralConfig>& cfgs);

torch::Tensor multi_resolution_stft_loss(const torch::Tensor& x, const torch::Tensor& x_hat,
                                         const std::vector<SpectralConfig>& cfgs);

double multi_resolution_stft_loss(const Waveform& w, const Waveform& w_hat,
                                  const std::vector<SpectralConfig>& cfgs);

}  // namespace wavelatent::signal
