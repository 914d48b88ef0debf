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

#include <nlohmann/json.hpp>

namespace wavelatent::flow {

struct TextEncoderConfig {
  int vocab_size = 64;
  int hidden = 192;
  int layers = 3;
  int kernel_size = 5;
};

/// Per-token diagonal Gaussian prior: both tensors are [B, C, M].
struct PriorStats {
  torch::Tensor mu;
  torch::Tensor log_sigma;
};

struct TextEncoding {
  PriorStats prior;
  torch::Tensor hidden;  // [B, H, M]
  torch::Tensor mask;    // [B, 1, M], float 0/1
};

/// [B, M] token ids -> (PriorStats, hidden states). Context comes from a
/// stack of residual convolutions with layer normalization over channels.
class TextEncoderImpl : public torch::nn::Module {
 public:
  TextEncoderImpl(const TextEncoderConfig& cfg, int latent_dim);

  /// `tokens` is int64 [B, M]; `lengths` is int64 [B]. Throws ArgumentError
  /// for ids outside [0, vocab_size).
  TextEncoding forward(const torch::Tensor& tokens, const torch::Tensor& lengths);

 private:
  TextEncoderConfig cfg_;
  int latent_dim_;
  torch::nn::Embedding embedding_{nullptr};
  torch::nn::ModuleList convs_{nullptr};
  torch::nn::ModuleList norms_{nullptr};
  torch::nn::Conv1d proj_{nullptr};
};
TORCH_MODULE(TextEncoder);

/// [B, 1, M] validity mask for a batch of lengths.
torch::Tensor sequence_mask(const torch::Tensor& lengths, std::int64_t max_length);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TextEncoderConfig, vocab_size, hidden, layers,
                                                kernel_size)

}  // namespace wavelatent::flow
