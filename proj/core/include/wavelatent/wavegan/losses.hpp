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

#include <torch/torch.h>

#include "wavelatent/wavegan/model.hpp"

namespace wavelatent::wavegan {

/// Mean over frames and channels of 0.5 (mu^2 + sigma^2 - 1 - 2 log sigma),
/// i.e. KL(q || N(0, I)) per latent element.
torch::Tensor kl_loss(const LatentPosterior& post);

struct PitchLoss {
  torch::Tensor value;     // scalar; zero when nothing is voiced
  bool has_voiced = false;
};

/// Root-mean-square log-F0 error over voiced frames:
/// ||(pred - target)[voiced]||_2 / sqrt(#voiced). All tensors share one shape
/// ([F] or [B, F]); `voiced` is boolean. Throws ArgumentError on a shape
/// mismatch.
PitchLoss pitch_loss(const torch::Tensor& pred, const torch::Tensor& target,
                     const torch::Tensor& voiced);

}  // namespace wavelatent::wavegan
