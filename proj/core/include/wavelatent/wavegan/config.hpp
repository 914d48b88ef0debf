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

namespace wavelatent::wavegan {

// Strided 1-D convolutions: a stage with factor f uses kernel 2f, stride f,
// padding f/2, so every factor must be even. Residual stacks after each stage
// use dilated convolutions (kernel `residual_kernel`) with the listed
// dilations.

struct EncoderConfig {
  int pre_channels = 64;
  std::vector<int> down_factors{2, 4, 4, 8};
  std::vector<int> down_channels{128, 128, 256, 512};
  int latent_dim = 256;
  int kernel_size = 7;
  int residual_kernel = 3;
  std::vector<int> dilations{1, 3, 9};

  int total_factor() const;
};

struct DecoderConfig {
  int input_channels = 256;  // latent_dim, or the mel band count in Inner-GAN mode
  int pre_channels = 512;
  std::vector<int> up_factors{8, 4, 4, 2};
  std::vector<int> up_channels{256, 128, 128, 64};
  int kernel_size = 7;
  int residual_kernel = 3;
  std::vector<int> dilations{1, 3, 9};

  int total_factor() const;
};

struct PitchPredictorConfig {
  int channels = 256;
  int kernel_size = 5;
};

struct WaveGanConfig {
  EncoderConfig encoder;
  DecoderConfig decoder;
  PitchPredictorConfig pitch;
  float log_sigma_min = -9.0f;
  float log_sigma_max = 2.0f;
  float leaky_slope = 0.2f;
  // Detach the pitch predictor input so pitch supervision cannot reach the
  // encoder (ablation switch).
  bool stop_gradient_pitch = false;

  /// Throws ArgumentError on mismatched factors, odd factors, or a decoder
  /// whose input width differs from the encoder's latent width.
  void validate() const;
  int hop_size() const { return encoder.total_factor(); }
};

/// Decoder-only configuration for mel-conditioned (Inner-GAN) vocoding.
WaveGanConfig inner_gan_config(const WaveGanConfig& base, int n_mels);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EncoderConfig, pre_channels, down_factors,
                                                down_channels, latent_dim, kernel_size,
                                                residual_kernel, dilations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DecoderConfig, input_channels, pre_channels,
                                                up_factors, up_channels, kernel_size,
                                                residual_kernel, dilations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PitchPredictorConfig, channels, kernel_size)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WaveGanConfig, encoder, decoder, pitch,
                                                log_sigma_min, log_sigma_max, leaky_slope,
                                                stop_gradient_pitch)

}  // namespace wavelatent::wavegan
