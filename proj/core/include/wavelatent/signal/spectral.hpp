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

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/signal/waveform.hpp"

namespace wavelatent::signal {

enum class WindowKind { kHann, kRectangular };

/// Analysis parameters of one short-time Fourier transform.
///
/// Frames are centered: the signal is reflect-padded by fft_size/2 on both
/// sides, so a length-T signal yields 1 + T / hop_size frames and frame t is
/// centered on sample t * hop_size.
struct SpectralConfig {
  int fft_size = 1024;
  int hop_size = 256;
  int window_size = 1024;
  WindowKind window = WindowKind::kHann;

  void validate() const;
  int bins() const { return fft_size / 2 + 1; }
  bool operator==(const SpectralConfig&) const = default;
};

/// Mel analysis: an STFT followed by a triangular (HTK-scale) filterbank.
struct MelConfig {
  SpectralConfig spectral;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 0.0;  // 0 selects sample_rate / 2

  bool operator==(const MelConfig&) const = default;
};

/// Magnitudes are clamped to this floor before any log compression.
inline constexpr double kLogFloor = 1e-5;

std::int64_t stft_frame_count(std::int64_t length, const SpectralConfig& cfg);

/// Differentiable magnitude STFT. `x` is [T] or [B, T]; the result is
/// [frames, bins] or [B, frames, bins]. Throws ArgumentError for empty input
/// or input too short for reflect padding.
torch::Tensor stft_magnitude(const torch::Tensor& x, const SpectralConfig& cfg);

/// [frames, bins] magnitude spectrogram of a waveform.
torch::Tensor stft_magnitude(const Waveform& w, const SpectralConfig& cfg);

/// [n_mels, bins] triangular filterbank. Every row has a positive sum: filters
/// too narrow to cover a bin center collapse onto the nearest bin.
torch::Tensor mel_filterbank(int sample_rate, int fft_size, int n_mels, double fmin,
                             double fmax);

/// Log-mel spectrogram, log(max(mel, kLogFloor)), with a precomputed
/// filterbank. `x` is [T] or [B, T]; the result is [.., frames, n_mels].
torch::Tensor log_mel_spectrogram(const torch::Tensor& x, const torch::Tensor& filterbank,
                                  const SpectralConfig& cfg);

/// Log-mel spectrogram of a waveform. Throws ArgumentError when
/// fmin >= fmax or fmax exceeds the Nyquist rate.
torch::Tensor mel_spectrogram(const Waveform& w, const MelConfig& cfg);

torch::Tensor mel_spectrogram(const torch::Tensor& x, int sample_rate, const MelConfig& cfg);

NLOHMANN_JSON_SERIALIZE_ENUM(WindowKind, {{WindowKind::kHann, "hann"},
                                         {WindowKind::kRectangular, "rectangular"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SpectralConfig, fft_size, hop_size, window_size,
                                                window)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MelConfig, spectral, n_mels, fmin, fmax)

}  // namespace wavelatent::signal
