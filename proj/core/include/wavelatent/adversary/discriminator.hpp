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

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/signal/spectral.hpp"

namespace wavelatent::adversary {

struct MelAnalysis {
  signal::SpectralConfig spectral;
  int n_mels = 80;

  bool operator==(const MelAnalysis&) const = default;
};

/// Six mel-spectrum discriminators. Each stacks `layers` 2-D convolutions
/// (kernel 3x9 over mel x time, stride 2 along time, channels doubling from
/// `base_channels` up to `max_channels`) with leaky-ReLU, then a 3x3
/// convolution to a one-channel patch score map.
struct DiscriminatorBankConfig {
  std::vector<MelAnalysis> analyses;
  int layers = 5;
  int base_channels = 32;
  int max_channels = 512;
  double fmin = 0.0;
  double fmax = 0.0;  // 0 selects the Nyquist rate
  float leaky_slope = 0.2f;

  /// fft 128..4096, hop fft/4, window fft, mel bands 10..160.
  static DiscriminatorBankConfig defaults();

  void validate() const;
  /// Shortest waveform every analysis accepts.
  std::int64_t min_samples() const;
};

inline constexpr std::size_t kDiscriminatorCount = 6;

struct DiscriminatorOutput {
  torch::Tensor score;                 // [B, 1, mels', frames']
  std::vector<torch::Tensor> features;  // one per convolution layer
};

class SpectrumDiscriminatorImpl : public torch::nn::Module {
 public:
  SpectrumDiscriminatorImpl(const MelAnalysis& analysis, const DiscriminatorBankConfig& cfg,
                            int sample_rate);
  DiscriminatorOutput forward(const torch::Tensor& audio);

 private:
  signal::SpectralConfig spectral_;
  torch::Tensor filterbank_;
  torch::nn::ModuleList convs_{nullptr};
  torch::nn::Conv2d score_{nullptr};
  float slope_;
};
TORCH_MODULE(SpectrumDiscriminator);

class DiscriminatorBankImpl : public torch::nn::Module {
 public:
  DiscriminatorBankImpl(const DiscriminatorBankConfig& cfg, int sample_rate);

  /// `audio` is [T] or [B, T]. Throws ArgumentError when shorter than
  /// min_samples().
  std::vector<DiscriminatorOutput> forward(const torch::Tensor& audio);

  const DiscriminatorBankConfig& config() const { return cfg_; }

 private:
  DiscriminatorBankConfig cfg_;
  torch::nn::ModuleList discriminators_{nullptr};
};
TORCH_MODULE(DiscriminatorBank);

void to_json(nlohmann::json& j, const MelAnalysis& a);
void from_json(const nlohmann::json& j, MelAnalysis& a);
void to_json(nlohmann::json& j, const DiscriminatorBankConfig& c);
void from_json(const nlohmann::json& j, DiscriminatorBankConfig& c);

}  // namespace wavelatent::adversary
