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

#include "wavelatent/adversary/losses.hpp"

#include "wavelatent/errors.hpp"

namespace wavelatent::adversary {

torch::Tensor lsgan_generator_loss(const std::vector<DiscriminatorOutput>& fake) {
  if (fake.empty()) throw ArgumentError("generator loss needs at least one discriminator");
  auto loss = torch::zeros({}, fake.front().score.options());
  for (const auto& d : fake) loss = loss + torch::mean((d.score - 1.0).square());
  return loss / static_cast<double>(fake.size());
}

torch::Tensor lsgan_discriminator_loss(const std::vector<DiscriminatorOutput>& real,
                                       const std::vector<DiscriminatorOutput>& fake) {
  if (real.size() != fake.size() || real.empty()) {
    throw ArgumentError("discriminator loss needs equal, non-empty output lists");
  }
  auto loss = torch::zeros({}, real.front().score.options());
  for (std::size_t s = 0; s < real.size(); ++s) {
    loss = loss + torch::mean((real[s].score - 1.0).square()) + torch::mean(fake[s].score.square());
  }
  return loss / static_cast<double>(real.size());
}

torch::Tensor feature_matching_loss(const std::vector<DiscriminatorOutput>& real,
                                    const std::vector<DiscriminatorOutput>& fake) {
  if (real.size() != fake.size() || real.empty()) {
    throw ArgumentError("feature matching needs equal, non-empty output lists");
  }
  auto loss = torch::zeros({}, fake.front().score.options());
  for (std::size_t s = 0; s < real.size(); ++s) {
    if (real[s].features.size() != fake[s].features.size()) {
      throw ArgumentError("feature matching: layer counts differ");
    }
    for (std::size_t i = 0; i < real[s].features.size(); ++i) {
      if (real[s].features[i].sizes() != fake[s].features[i].sizes()) {
        throw ArgumentError("feature matching: feature map shapes differ");
      }
      loss = loss + torch::mean(torch::abs(real[s].features[i] - fake[s].features[i]));
    }
  }
  return loss;
}

}  // namespace wavelatent::adversary
