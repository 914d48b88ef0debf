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

#include "wavelatent/wavegan/losses.hpp"

#include "wavelatent/errors.hpp"

namespace wavelatent::wavegan {

torch::Tensor kl_loss(const LatentPosterior& post) {
  const auto& mu = post.mu;
  const auto& ls = post.log_sigma;
  return 0.5 * torch::mean(mu.square() + (2.0 * ls).exp() - 1.0 - 2.0 * ls);
}

PitchLoss pitch_loss(const torch::Tensor& pred, const torch::Tensor& target,
                     const torch::Tensor& voiced) {
  if (pred.sizes() != target.sizes() || pred.sizes() != voiced.sizes()) {
    throw ArgumentError("pitch loss inputs differ in frame count");
  }
  auto mask = voiced.to(torch::kBool);
  const auto count = mask.sum().item<std::int64_t>();
  if (count == 0) return {torch::zeros({}, pred.options()) * pred.sum(), false};
  auto diff = torch::masked_select(pred - target, mask);
  return {torch::linalg_vector_norm(diff, 2) / std::sqrt(static_cast<double>(count)), true};
}

}  // namespace wavelatent::wavegan
