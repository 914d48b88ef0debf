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

#include "wavelatent/wavegan/model.hpp"

#include <cmath>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::wavegan {
namespace F = torch::nn::functional;

namespace {

torch::Tensor leaky(const torch::Tensor& x, float slope) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(slope));
}

torch::nn::Conv1d same_conv(int in, int out, int kernel, int dilation = 1) {
  return torch::nn::Conv1d(torch::nn::Conv1dOptions(in, out, kernel)
                               .dilation(dilation)
                               .padding(dilation * (kernel - 1) / 2));
}

template <typename Holder>
std::vector<torch::Tensor> params_of(const Holder& m) {
  return m.is_empty() ? std::vector<torch::Tensor>{} : m->parameters();
}

}  // namespace

ResidualStackImpl::ResidualStackImpl(int channels, int kernel_size,
                                     const std::vector<int>& dilations, float leaky_slope)
    : slope_(leaky_slope) {
  dilated_ = register_module("dilated", torch::nn::ModuleList());
  pointwise_ = register_module("pointwise", torch::nn::ModuleList());
  for (int d : dilations) {
    dilated_->push_back(same_conv(channels, channels, kernel_size, d));
    pointwise_->push_back(same_conv(channels, channels, 1));
  }
}

torch::Tensor ResidualStackImpl::forward(torch::Tensor x) {
  for (std::size_t i = 0; i < dilated_->size(); ++i) {
    auto h = dilated_[i]->as<torch::nn::Conv1d>()->forward(leaky(x, slope_));
    h = pointwise_[i]->as<torch::nn::Conv1d>()->forward(leaky(h, slope_));
    x = x + h;
  }
  return x;
}

EncoderImpl::EncoderImpl(const EncoderConfig& cfg, float leaky_slope)
    : latent_dim_(cfg.latent_dim), slope_(leaky_slope) {
  pre_ = register_module("pre", same_conv(1, cfg.pre_channels, cfg.kernel_size));
  down_ = register_module("down", torch::nn::ModuleList());
  residual_ = register_module("residual", torch::nn::ModuleList());
  int in = cfg.pre_channels;
  for (std::size_t i = 0; i < cfg.down_factors.size(); ++i) {
    const int f = cfg.down_factors[i];
    const int out = cfg.down_channels[i];
    down_->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(in, out, 2 * f).stride(f).padding(f / 2)));
    residual_->push_back(ResidualStack(out, cfg.residual_kernel, cfg.dilations, leaky_slope));
    in = out;
  }
  post_ = register_module("post", same_conv(in, 2 * cfg.latent_dim, cfg.kernel_size));
}

std::pair<torch::Tensor, torch::Tensor> EncoderImpl::forward(torch::Tensor x) {
  x = pre_(x);
  for (std::size_t i = 0; i < down_->size(); ++i) {
    x = down_[i]->as<torch::nn::Conv1d>()->forward(leaky(x, slope_));
    x = residual_[i]->as<ResidualStack>()->forward(x);
  }
  auto stats = post_(leaky(x, slope_));
  auto parts = stats.split(latent_dim_, 1);
  return {parts[0], parts[1]};
}

DecoderImpl::DecoderImpl(const DecoderConfig& cfg, float leaky_slope) : slope_(leaky_slope) {
  pre_ = register_module("pre", same_conv(cfg.input_channels, cfg.pre_channels, cfg.kernel_size));
  up_ = register_module("up", torch::nn::ModuleList());
  residual_ = register_module("residual", torch::nn::ModuleList());
  int in = cfg.pre_channels;
  for (std::size_t i = 0; i < cfg.up_factors.size(); ++i) {
    const int f = cfg.up_factors[i];
    const int out = cfg.up_channels[i];
    up_->push_back(torch::nn::ConvTranspose1d(
        torch::nn::ConvTranspose1dOptions(in, out, 2 * f).stride(f).padding(f / 2)));
    residual_->push_back(ResidualStack(out, cfg.residual_kernel, cfg.dilations, leaky_slope));
    in = out;
  }
  post_ = register_module("post", same_conv(in, 1, cfg.kernel_size));
}

torch::Tensor DecoderImpl::forward(torch::Tensor z) {
  auto x = pre_(z);
  for (std::size_t i = 0; i < up_->size(); ++i) {
    x = up_[i]->as<torch::nn::ConvTranspose1d>()->forward(leaky(x, slope_));
    x = residual_[i]->as<ResidualStack>()->forward(x);
  }
  return torch::tanh(post_(leaky(x, slope_)));
}

PitchPredictorImpl::PitchPredictorImpl(int latent_dim, const PitchPredictorConfig& cfg) {
  conv1_ = register_module("conv1", same_conv(latent_dim, cfg.channels, cfg.kernel_size));
  conv2_ = register_module("conv2", same_conv(cfg.channels, cfg.channels, cfg.kernel_size));
  out_ = register_module("out", torch::nn::Linear(cfg.channels, 1));
  // Start at the log-centre of the tracker's 50..800 Hz band rather than 0 Hz.
  torch::NoGradGuard no_grad;
  out_->bias.fill_(0.5 * (std::log(50.0) + std::log(800.0)));
}

torch::Tensor PitchPredictorImpl::forward(torch::Tensor z) {
  auto h = torch::relu(conv1_(z));
  h = torch::relu(conv2_(h));
  return out_(h.transpose(1, 2)).squeeze(-1);
}

WaveGan::WaveGan(const WaveGanConfig& cfg, bool decoder_only)
    : cfg_(cfg), decoder_only_(decoder_only) {
  if (!decoder_only_) {
    cfg_.validate();
    encoder_ = Encoder(cfg_.encoder, cfg_.leaky_slope);
    pitch_ = PitchPredictor(cfg_.encoder.latent_dim, cfg_.pitch);
  }
  decoder_ = Decoder(cfg_.decoder, cfg_.leaky_slope);
}

LatentPosterior WaveGan::encode(const torch::Tensor& audio) {
  if (decoder_only_) throw ArgumentError("decoder-only model has no encoder");
  auto x = audio.dim() == 1 ? audio.unsqueeze(0) : audio;
  if (x.dim() != 2) throw ArgumentError("encode expects [T] or [B, T] audio");
  const std::int64_t hop = cfg_.encoder.total_factor();
  const std::int64_t length = x.size(1);
  if (length < hop) {
    throw ArgumentError("waveform of " + std::to_string(length) +
                        " samples is shorter than one latent frame (" + std::to_string(hop) + ")");
  }
  const std::int64_t frames = (length + hop - 1) / hop;
  if (frames * hop != length) x = F::pad(x, F::PadFuncOptions({0, frames * hop - length}));
  auto [mu, log_sigma] = encoder_(x.unsqueeze(1));
  return {mu, torch::clamp(log_sigma, cfg_.log_sigma_min, cfg_.log_sigma_max)};
}

torch::Tensor WaveGan::decode(const torch::Tensor& z) {
  if (z.dim() != 3) throw ArgumentError("decode expects [B, C, F] latents");
  if (z.size(1) != cfg_.decoder.input_channels) {
    throw ArgumentError("decoder expects " + std::to_string(cfg_.decoder.input_channels) +
                        " input channels, got " + std::to_string(z.size(1)));
  }
  return decoder_(z).squeeze(1);
}

torch::Tensor WaveGan::predict_pitch(const torch::Tensor& z) {
  if (decoder_only_) throw ArgumentError("decoder-only model has no pitch predictor");
  return pitch_(cfg_.stop_gradient_pitch ? z.detach() : z);
}

std::vector<torch::Tensor> WaveGan::encoder_parameters() const { return params_of(encoder_); }
std::vector<torch::Tensor> WaveGan::decoder_parameters() const { return params_of(decoder_); }
std::vector<torch::Tensor> WaveGan::pitch_parameters() const { return params_of(pitch_); }

void WaveGan::train(bool on) {
  if (encoder_) encoder_->train(on);
  if (pitch_) pitch_->train(on);
  decoder_->train(on);
}

void WaveGan::to(torch::Dtype dtype) {
  if (encoder_) encoder_->to(dtype);
  if (pitch_) pitch_->to(dtype);
  decoder_->to(dtype);
}

torch::Tensor sample_latent(const LatentPosterior& post, torch::Generator& generator) {
  auto eps = torch::randn(post.mu.sizes(), generator, post.mu.options().requires_grad(false));
  return post.mu + post.log_sigma.exp() * eps;
}

}  // namespace wavelatent::wavegan
