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

#include "wavelatent/adversary/discriminator.hpp"

namespace wavelatent::adversary {

/// Mean over discriminators of mean((score - 1)^2).
torch::Tensor lsgan_generator_loss(const std::vector<DiscriminatorOutput>& fake);

/// Mean over discriminators of mean((real - 1)^2) + mean(fake^2).
/// Throws ArgumentError when the lists differ in length.
torch::Tensor lsgan_discriminator_loss(const std::vector<DiscriminatorOutput>& real,
                                       const std::vector<DiscriminatorOutput>& fake);

/// Sum over discriminators and layers of mean |real - fake|, i.e.
/// (1 / N_i) * L1 with N_i the unit count of layer i. Real features are
/// taken as given; callers detach them when they must not receive gradient.
/// Throws ArgumentError on a structure mismatch.
torch::Tensor feature_matching_loss(const std::vector<DiscriminatorOutput>& real,
                                    const std::vector<DiscriminatorOutput>& fake);

}  // namespace wavelatent::adversary
