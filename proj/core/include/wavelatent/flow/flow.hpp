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

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace wavelatent::flow {

/// Each block is actnorm -> invertible channel mixing -> affine coupling.
/// Frames are squeezed by `squeeze` along time before the first block
/// (channels multiply, frames divide) and unsqueezed after the last.
struct FlowConfig {
  int channels = 256;
  int blocks = 12;
  int squeeze = 2;
  int hidden = 192;
  int coupling_layers = 4;
  int kernel_size = 5;

  void validate() const;
};

/// Common interface of the flow's invertible steps. `mask` is [B, 1, T]
/// (float 0/1); log-determinants are per batch element, [B], and count only
/// masked-in frames.
class InvertibleTransform : public torch::nn::Module {
 public:
  virtual std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x,
                                                          const torch::Tensor& mask) = 0;
  virtual std::pair<torch::Tensor, torch::Tensor> inverse(const torch::Tensor& y,
                                                          const torch::Tensor& mask) = 0;
};

/// Per-channel y = bias + exp(log_scale) * x, initialized from the first
/// training batch so outputs start with zero mean and unit variance.
class ActNorm : public InvertibleTransform {
 public:
  explicit ActNorm(int channels);
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x,
                                                  const torch::Tensor& mask) override;
  std::pair<torch::Tensor, torch::Tensor> inverse(const torch::Tensor& y,
                                                  const torch::Tensor& mask) override;

  torch::Tensor log_scale, bias, initialized;
};

/// Full-rank 1x1 convolution y = W x, initialized to a random rotation.
class InvertibleMix : public InvertibleTransform {
 public:
  explicit InvertibleMix(int channels);
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x,
                                                  const torch::Tensor& mask) override;
  std::pair<torch::Tensor, torch::Tensor> inverse(const torch::Tensor& y,
                                                  const torch::Tensor& mask) override;

  torch::Tensor weight;  // [C, C]
};

/// Affine coupling: the second half of the channels is scaled and shifted by
/// a gated dilated-convolution network of the first half. The network's last
/// layer starts at zero, so a fresh coupling is the identity.
class AffineCoupling : public InvertibleTransform {
 public:
  AffineCoupling(int channels, int hidden, int layers, int kernel_size);
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x,
                                                  const torch::Tensor& mask) override;
  std::pair<torch::Tensor, torch::Tensor> inverse(const torch::Tensor& y,
                                                  const torch::Tensor& mask) override;

  torch::nn::Conv1d& end_layer() { return end_; }

 private:
  std::pair<torch::Tensor, torch::Tensor> shift_and_log_scale(const torch::Tensor& xa,
                                                              const torch::Tensor& mask);

  int half_;
  int hidden_;
  torch::nn::Conv1d start_{nullptr};
  torch::nn::ModuleList gates_{nullptr};
  torch::nn::ModuleList res_skip_{nullptr};
  torch::nn::Conv1d end_{nullptr};
};

struct FlowOutput {
  torch::Tensor c;           // [B, C, T_pad]; T_pad is a multiple of `squeeze`
  torch::Tensor frame_mask;  // [B, 1, T_pad]: 1 on true frames only
  torch::Tensor logdet;      // [B]
};

class FlowStackImpl : public torch::nn::Module {
 public:
  explicit FlowStackImpl(const FlowConfig& cfg);

  /// z is [B, C, T] with per-item lengths (int64 [B]). Items whose length is
  /// not a multiple of `squeeze` are right-padded by repeating their last
  /// frame; the padded frames pass through the flow but are flagged out of
  /// frame_mask.
  FlowOutput forward(const torch::Tensor& z, const torch::Tensor& lengths);
  FlowOutput forward(const torch::Tensor& z);

  /// Inverse map. `c` is [B, C, T] with any T >= max(lengths); padding
  /// follows the same rule as forward, and the result is truncated to
  /// max(lengths) frames with frames past each length zeroed. Returns
  /// (z, logdet of the inverse map).
  std::pair<torch::Tensor, torch::Tensor> inverse(const torch::Tensor& c,
                                                  const torch::Tensor& lengths);
  torch::Tensor inverse(const torch::Tensor& c);

  const FlowConfig& config() const { return cfg_; }
  const std::vector<std::shared_ptr<InvertibleTransform>>& transforms() const { return steps_; }

  /// Appends a transform (used to extend a frozen stack).
  void append(std::shared_ptr<InvertibleTransform> step);

 private:
  FlowConfig cfg_;
  std::vector<std::shared_ptr<InvertibleTransform>> steps_;
};
TORCH_MODULE(FlowStack);

// Time <-> channel reshapes used around the flow.
torch::Tensor squeeze_frames(const torch::Tensor& x, int factor);
torch::Tensor unsqueeze_frames(const torch::Tensor& x, int factor);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FlowConfig, channels, blocks, squeeze, hidden,
                                                coupling_layers, kernel_size)

}  // namespace wavelatent::flow
