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

#include "wavelatent/signal/spectral.hpp"

#include <cmath>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::signal {
namespace {

torch::Tensor make_window(const SpectralConfig& cfg, const torch::TensorOptions& options) {
  if (cfg.window == WindowKind::kRectangular) return torch::ones({cfg.window_size}, options);
  return torch::hann_window(cfg.window_size, /*periodic=*/true, options);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

void SpectralConfig::validate() const {
  if (fft_size <= 0 || hop_size <= 0 || window_size <= 0) {
    throw ArgumentError("spectral sizes must be positive");
  }
  if (window_size > fft_size) throw ArgumentError("window_size must not exceed fft_size");
  if (hop_size > window_size) throw ArgumentError("hop_size must not exceed window_size");
}

std::int64_t stft_frame_count(std::int64_t length, const SpectralConfig& cfg) {
  return 1 + length / cfg.hop_size;
}

torch::Tensor stft_magnitude(const torch::Tensor& x, const SpectralConfig& cfg) {
  cfg.validate();
  if (x.dim() < 1 || x.dim() > 2) throw ArgumentError("stft input must be [T] or [B, T]");
  const std::int64_t length = x.size(-1);
  if (length == 0) throw ArgumentError("stft input is empty");
  if (length <= cfg.fft_size / 2) {
    throw ArgumentError("stft input of " + std::to_string(length) +
                        " samples is too short for fft_size " + std::to_string(cfg.fft_size));
  }
  auto window = make_window(cfg, x.options().requires_grad(false));
  auto spec = torch::stft(x, cfg.fft_size, cfg.hop_size, cfg.window_size, window,
                          /*center=*/true, "reflect", /*normalized=*/false,
                          /*onesided=*/true, /*return_complex=*/true);
  return spec.abs().transpose(-1, -2);
}

torch::Tensor stft_magnitude(const Waveform& w, const SpectralConfig& cfg) {
  if (w.empty()) throw ArgumentError("stft input is empty");
  return stft_magnitude(to_tensor(w), cfg);
}

torch::Tensor mel_filterbank(int sample_rate, int fft_size, int n_mels, double fmin,
                             double fmax) {
  if (sample_rate <= 0 || fft_size <= 0 || n_mels <= 0) {
    throw ArgumentError("mel filterbank sizes must be positive");
  }
  if (fmax <= 0.0) fmax = sample_rate / 2.0;
  if (fmin < 0.0 || fmin >= fmax) throw ArgumentError("mel analysis requires 0 <= fmin < fmax");
  if (fmax > sample_rate / 2.0) throw ArgumentError("mel fmax exceeds the Nyquist rate");

  const int bins = fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (n_mels + 1));
  }

  auto fb = torch::zeros({n_mels, bins}, torch::kFloat32);
  auto acc = fb.accessor<float, 2>();
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    double row_sum = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      const double up = (f - left) / (center - left);
      const double down = (right - f) / (right - center);
      const double weight = std::max(0.0, std::min(up, down));
      acc[m][k] = static_cast<float>(weight);
      row_sum += weight;
    }
    if (row_sum <= 0.0) {
      const int nearest = std::min(bins - 1, static_cast<int>(std::lround(center / bin_hz)));
      acc[m][nearest] = 1.0f;
    }
  }
  return fb;
}

torch::Tensor log_mel_spectrogram(const torch::Tensor& x, const torch::Tensor& filterbank,
                                  const SpectralConfig& cfg) {
  auto mag = stft_magnitude(x, cfg);
  auto mel = torch::matmul(mag, filterbank.to(mag.options().requires_grad(false)).t());
  return torch::clamp_min(mel, kLogFloor).log();
}

torch::Tensor mel_spectrogram(const torch::Tensor& x, int sample_rate, const MelConfig& cfg) {
  auto fb = mel_filterbank(sample_rate, cfg.spectral.fft_size, cfg.n_mels, cfg.fmin, cfg.fmax);
  return log_mel_spectrogram(x, fb, cfg.spectral);
}

torch::Tensor mel_spectrogram(const Waveform& w, const MelConfig& cfg) {
  if (w.empty()) throw ArgumentError("mel input is empty");
  return mel_spectrogram(to_tensor(w), w.sample_rate, cfg);
}

}  // namespace wavelatent::signal
