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

#include "wavelatent/adversary/discriminator.hpp"

#include <algorithm>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::adversary {
namespace F = torch::nn::functional;

DiscriminatorBankConfig DiscriminatorBankConfig::defaults() {
  DiscriminatorBankConfig cfg;
  const int ffts[] = {128, 256, 512, 1024, 2048, 4096};
  const int mels[] = {10, 20, 40, 80, 120, 160};
  for (int i = 0; i < 6; ++i) {
    cfg.analyses.push_back(
        {signal::SpectralConfig{ffts[i], ffts[i] / 4, ffts[i], signal::WindowKind::kHann},
         mels[i]});
  }
  return cfg;
}

void DiscriminatorBankConfig::validate() const {
  if (analyses.size() != kDiscriminatorCount) {
    throw ArgumentError("discriminator bank needs exactly 6 analyses, got " +
                        std::to_string(analyses.size()));
  }
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    analyses[i].spectral.validate();
    if (analyses[i].n_mels <= 0) throw ArgumentError("mel band count must be positive");
    for (std::size_t j = i + 1; j < analyses.size(); ++j) {
      if (analyses[i] == analyses[j]) throw ArgumentError("discriminator analyses must be distinct");
    }
  }
  if (layers <= 0 || base_channels <= 0 || max_channels <= 0) {
    throw ArgumentError("discriminator layer and channel counts must be positive");
  }
}

std::int64_t DiscriminatorBankConfig::min_samples() const {
  std::int64_t n = 1;
  for (const auto& a : analyses) {
    n = std::max<std::int64_t>(n, std::max(a.spectral.window_size, a.spectral.fft_size / 2 + 1));
  }
  return n;
}

SpectrumDiscriminatorImpl::SpectrumDiscriminatorImpl(const MelAnalysis& analysis,
                                                     const DiscriminatorBankConfig& cfg,
                                                     int sample_rate)
    : spectral_(analysis.spectral), slope_(cfg.leaky_slope) {
  filterbank_ = register_buffer(
      "filterbank", signal::mel_filterbank(sample_rate, analysis.spectral.fft_size,
                                           analysis.n_mels, cfg.fmin, cfg.fmax));
  convs_ = register_module("convs", torch::nn::ModuleList());
  int in = 1;
  int out = cfg.base_channels;
  for (int i = 0; i < cfg.layers; ++i) {
    convs_->push_back(torch::nn::Conv2d(
        torch::nn::Conv2dOptions(in, out, {3, 9}).stride({1, 2}).padding({1, 4})));
    in = out;
    out = std::min(out * 2, cfg.max_channels);
  }
  score_ = register_module(
      "score", torch::nn::Conv2d(torch::nn::Conv2dOptions(in, 1, {3, 3}).padding({1, 1})));
}

DiscriminatorOutput SpectrumDiscriminatorImpl::forward(const torch::Tensor& audio) {
  // [B, frames, mels] -> [B, 1, mels, frames]
  auto x = signal::log_mel_spectrogram(audio, filterbank_, spectral_).transpose(1, 2).unsqueeze(1);
  DiscriminatorOutput out;
  out.features.reserve(convs_->size());
  for (const auto& conv : *convs_) {
    x = F::leaky_relu(conv->as<torch::nn::Conv2d>()->forward(x),
                      F::LeakyReLUFuncOptions().negative_slope(slope_));
    out.features.push_back(x);
  }
  out.score = score_(x);
  return out;
}

DiscriminatorBankImpl::DiscriminatorBankImpl(const DiscriminatorBankConfig& cfg, int sample_rate)
    : cfg_(cfg) {
  cfg_.validate();
  discriminators_ = register_module("discriminators", torch::nn::ModuleList());
  for (const auto& analysis : cfg_.analyses) {
    discriminators_->push_back(SpectrumDiscriminator(analysis, cfg_, sample_rate));
  }
}

std::vector<DiscriminatorOutput> DiscriminatorBankImpl::forward(const torch::Tensor& audio) {
  auto x = audio.dim() == 1 ? audio.unsqueeze(0) : audio;
  if (x.dim() != 2) throw ArgumentError("discriminators expect [T] or [B, T] audio");
  if (x.size(1) < cfg_.min_samples()) {
    throw ArgumentError("waveform of " + std::to_string(x.size(1)) +
                        " samples is shorter than the largest discriminator window (" +
                        std::to_string(cfg_.min_samples()) + ")");
  }
  std::vector<DiscriminatorOutput> outputs;
  outputs.reserve(discriminators_->size());
  for (const auto& d : *discriminators_) {
    outputs.push_back(d->as<SpectrumDiscriminator>()->forward(x));
  }
  return outputs;
}

void to_json(nlohmann::json& j, const MelAnalysis& a) {
  j = nlohmann::json{{"fft_size", a.spectral.fft_size},
                     {"hop_size", a.spectral.hop_size},
                     {"window_size", a.spectral.window_size},
                     {"n_mels", a.n_mels}};
}

void from_json(const nlohmann::json& j, MelAnalysis& a) {
  a.spectral.fft_size = j.at("fft_size").get<int>();
  a.spectral.hop_size = j.value("hop_size", a.spectral.fft_size / 4);
  a.spectral.window_size = j.value("window_size", a.spectral.fft_size);
  a.spectral.window = signal::WindowKind::kHann;
  a.n_mels = j.at("n_mels").get<int>();
}

void to_json(nlohmann::json& j, const DiscriminatorBankConfig& c) {
  j = nlohmann::json{{"analyses", c.analyses},     {"layers", c.layers},
                     {"base_channels", c.base_channels}, {"max_channels", c.max_channels},
                     {"fmin", c.fmin},             {"fmax", c.fmax},
                     {"leaky_slope", c.leaky_slope}};
}

void from_json(const nlohmann::json& j, DiscriminatorBankConfig& c) {
  c = DiscriminatorBankConfig::defaults();
  if (j.contains("analyses")) c.analyses = j.at("analyses").get<std::vector<MelAnalysis>>();
  c.layers = j.value("layers", c.layers);
  c.base_channels = j.value("base_channels", c.base_channels);
  c.max_channels = j.value("max_channels", c.max_channels);
  c.fmin = j.value("fmin", c.fmin);
  c.fmax = j.value("fmax", c.fmax);
  c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
}

}  // namespace wavelatent::adversary
