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
#include <filesystem>
#include <string>
#include <vector>

#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/spectral.hpp"
#include "wavelatent/signal/waveform.hpp"
#include "wavelatent/wavegan/model.hpp"

namespace wavelatent::pipeline {

/// Objective stand-ins for listening tests.
struct EvalSettings {
  signal::MelConfig mel{{1024, 256, 1024, signal::WindowKind::kHann}, 80, 0.0, 0.0};
  int mcd_order = 24;
  signal::PitchConfig pitch;
  int pitch_hop = 256;
};

struct UtteranceMetrics {
  std::string id;
  double mel_l1 = 0.0;       // mean |log mel - log mel_hat|
  double mcd = 0.0;          // dB
  double pitch_rmse = 0.0;   // log Hz, frames voiced in both
  std::int64_t voiced_frames = 0;
};

struct ReconReport {
  std::vector<UtteranceMetrics> utterances;
  double mean_mel_l1 = 0.0;
  double mean_mcd = 0.0;
  double mean_pitch_rmse = 0.0;  // over utterances with shared voiced frames
};

/// Mean absolute difference of natural-log mel spectrograms over the
/// frames both signals cover.
double mel_l1(const signal::Waveform& ref, const signal::Waveform& est, const signal::MelConfig& mel);

/// Mel-cepstral distortion from an orthonormal DCT-II of the log-mel
/// spectrum, coefficients 1..order (energy term excluded), averaged over
/// frames: (10 / ln 10) * sqrt(2 * sum_k (c_k - c_hat_k)^2).
double mel_cepstral_distortion(const signal::Waveform& ref, const signal::Waveform& est,
                               const signal::MelConfig& mel, int order);

/// RMS log-F0 difference over frames voiced in both tracks; zero (with
/// `shared_frames` = 0) when there are none.
double voiced_pitch_rmse(const signal::PitchTrack& ref, const signal::PitchTrack& est,
                         std::int64_t* shared_frames = nullptr);

UtteranceMetrics compare(const std::string& id, const signal::Waveform& ref,
                         const signal::Waveform& est, const EvalSettings& settings);

/// Copy synthesis: encode, draw z from the posterior, decode.
signal::Waveform reconstruct(wavegan::WaveGan& model, const signal::Waveform& w,
                             torch::Generator& generator);

/// Reconstructs each (id, waveform) pair with a generator seeded by `seed`
/// and compares it with the original.
ReconReport evaluate_reconstruction(wavegan::WaveGan& model,
                                    const std::vector<std::pair<std::string, signal::Waveform>>& set,
                                    const EvalSettings& settings, std::uint64_t seed);

ReconReport summarize(std::vector<UtteranceMetrics> utterances);

void write_report(const std::filesystem::path& path, const ReconReport& report);

}  // namespace wavelatent::pipeline
