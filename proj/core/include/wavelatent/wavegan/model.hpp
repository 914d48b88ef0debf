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

#include <cstdint>
#include <vector>

#include <torch/torch.h>

#include "wavelatent/wavegan/config.hpp"

namespace wavelatent::wavegan {

/// Diagonal Gaussian q(z|w). Both tensors are [B, latent_dim, frames].
struct LatentPosterior {
  torch::Tensor mu;
  torch::Tensor log_sigma;

  std::int64_t frames() const { return mu.size(-1); }
  std::int64_t channels() const { return mu.size(-2); }
  torch::Tensor sigma() const { return log_sigma.exp(); }
};

/// Dilated residual units: x + conv1x1(act(dilated_conv(act(x)))) per dilation.
class ResidualStackImpl : public torch::nn::Module {
 public:
  ResidualStackImpl(int channels, int kernel_size, const std::vector<int>& dilations,
                    float leaky_slope);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::ModuleList dilated_{nullptr};
  torch::nn::ModuleList pointwise_{nullptr};
  float slope_;
};
TORCH_MODULE(ResidualStack);

/// Waveform [B, 1, T] -> (mu, log_sigma) at T / total_factor frames.
class EncoderImpl : public torch::nn::Module {
 public:
  EncoderImpl(const EncoderConfig& cfg, float leaky_slope);
  std::pair<torch::Tensor, torch::Tensor> forward(torch::Tensor x);

 private:
  torch::nn::Conv1d pre_{nullptr};
  torch::nn::ModuleList down_{nullptr};
  torch::nn::ModuleList residual_{nullptr};
  torch::nn::Conv1d post_{nullptr};
  int latent_dim_;
  float slope_;
};
TORCH_MODULE(Encoder);

/// Latent (or mel) [B, C, F] -> waveform [B, 1, F * total_factor] in [-1, 1].
class DecoderImpl : public torch::nn::Module {
 public:
  DecoderImpl(const DecoderConfig& cfg, float leaky_slope);
  torch::Tensor forward(torch::Tensor z);

 private:
  torch::nn::Conv1d pre_{nullptr};
  torch::nn::ModuleList up_{nullptr};
  torch::nn::ModuleList residual_{nullptr};
  torch::nn::Conv1d post_{nullptr};
  float slope_;
};
TORCH_MODULE(Decoder);

/// Two convolutions and a linear projection: [B, C, F] -> log-F0 [B, F].
class PitchPredictorImpl : public torch::nn::Module {
 public:
  PitchPredictorImpl(int latent_dim, const PitchPredictorConfig& cfg);
  torch::Tensor forward(torch::Tensor z);

 private:
  torch::nn::Conv1d conv1_{nullptr};
  torch::nn::Conv1d conv2_{nullptr};
  torch::nn::Linear out_{nullptr};
};
TORCH_MODULE(PitchPredictor);

/// The waveform VAE with its pitch head. In decoder-only mode (Inner-GAN)
/// the encoder and pitch predictor are absent.
class WaveGan {
 public:
  explicit WaveGan(const WaveGanConfig& cfg, bool decoder_only = false);

  const WaveGanConfig& config() const { return cfg_; }
  bool decoder_only() const { return decoder_only_; }
  int hop_size() const { return cfg_.decoder.up_factors.empty() ? 1 : cfg_.decoder.total_factor(); }

  /// Right-pads `audio` ([T] or [B, T]) with zeros to a multiple of the hop
  /// and returns the posterior over ceil(T / hop) frames. Throws
  /// ArgumentError for inputs shorter than one hop.
  LatentPosterior encode(const torch::Tensor& audio);

  /// [B, C, F] -> [B, F * hop]. Throws ArgumentError on a channel mismatch.
  torch::Tensor decode(const torch::Tensor& z);

  /// [B, C, F] -> [B, F]; honours stop_gradient_pitch.
  torch::Tensor predict_pitch(const torch::Tensor& z);

  Encoder& encoder() { return encoder_; }
  Decoder& decoder() { return decoder_; }
  PitchPredictor& pitch_predictor() { return pitch_; }

  std::vector<torch::Tensor> encoder_parameters() const;
  std::vector<torch::Tensor> decoder_parameters() const;
  std::vector<torch::Tensor> pitch_parameters() const;

  void train(bool on = true);
  void to(torch::Dtype dtype);

 private:
  WaveGanConfig cfg_;
  bool decoder_only_;
  Encoder encoder_{nullptr};
  Decoder decoder_{nullptr};
  PitchPredictor pitch_{nullptr};
};

/// Reparameterized draw z = mu + exp(log_sigma) * eps, eps ~ N(0, I) from
/// `generator`.
torch::Tensor sample_latent(const LatentPosterior& post, torch::Generator& generator);

}  // namespace wavelatent::wavegan
