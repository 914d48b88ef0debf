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

#include "wavelatent/flow/text_encoder.hpp"

#include <cmath>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::flow {

torch::Tensor sequence_mask(const torch::Tensor& lengths, std::int64_t max_length) {
  auto range = torch::arange(max_length, lengths.options().dtype(torch::kInt64));
  return (range.unsqueeze(0) < lengths.to(torch::kInt64).unsqueeze(1)).unsqueeze(1).to(torch::kFloat32);
}

TextEncoderImpl::TextEncoderImpl(const TextEncoderConfig& cfg, int latent_dim)
    : cfg_(cfg), latent_dim_(latent_dim) {
  if (cfg.vocab_size <= 0 || cfg.hidden <= 0 || cfg.layers < 0) {
    throw ArgumentError("invalid text encoder configuration");
  }
  embedding_ = register_module("embedding", torch::nn::Embedding(cfg.vocab_size, cfg.hidden));
  torch::nn::init::normal_(embedding_->weight, 0.0, 1.0 / std::sqrt(static_cast<double>(cfg.hidden)));
  convs_ = register_module("convs", torch::nn::ModuleList());
  norms_ = register_module("norms", torch::nn::ModuleList());
  for (int i = 0; i < cfg.layers; ++i) {
    convs_->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(cfg.hidden, cfg.hidden, cfg.kernel_size).padding(cfg.kernel_size / 2)));
    norms_->push_back(torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.hidden})));
  }
  proj_ = register_module("proj", torch::nn::Conv1d(torch::nn::Conv1dOptions(cfg.hidden, 2 * latent_dim, 1)));
}

TextEncoding TextEncoderImpl::forward(const torch::Tensor& tokens, const torch::Tensor& lengths) {
  if (tokens.dim() != 2) throw ArgumentError("text encoder expects [B, M] token ids");
  if (tokens.numel() > 0) {
    const auto lo = tokens.min().item<std::int64_t>();
    const auto hi = tokens.max().item<std::int64_t>();
    if (lo < 0 || hi >= cfg_.vocab_size) {
      throw ArgumentError("token id out of vocabulary range [0, " + std::to_string(cfg_.vocab_size) + ")");
    }
  }
  auto mask = sequence_mask(lengths, tokens.size(1)).to(embedding_->weight.dtype());
  auto x = (embedding_(tokens) * std::sqrt(static_cast<double>(cfg_.hidden))).transpose(1, 2) * mask;
  for (std::size_t i = 0; i < convs_->size(); ++i) {
    auto h = torch::relu(convs_[i]->as<torch::nn::Conv1d>()->forward(x * mask));
    x = norms_[i]->as<torch::nn::LayerNorm>()->forward((x + h).transpose(1, 2)).transpose(1, 2) * mask;
  }
  auto stats = proj_(x) * mask;
  auto parts = stats.split(latent_dim_, 1);
  return {{parts[0], parts[1]}, x, mask};
}

}  // namespace wavelatent::flow
