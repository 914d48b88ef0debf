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

#include "wavelatent/pipeline/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {
namespace {

// Log-mel frames of both signals cut to their common length, in double.
std::pair<torch::Tensor, torch::Tensor> aligned_log_mels(const signal::Waveform& ref,
                                                         const signal::Waveform& est,
                                                         const signal::MelConfig& mel) {
  if (ref.sample_rate != est.sample_rate) {
    throw ArgumentError("cannot compare waveforms at different sample rates");
  }
  auto a = signal::mel_spectrogram(ref, mel).to(torch::kFloat64);
  auto b = signal::mel_spectrogram(est, mel).to(torch::kFloat64);
  const auto frames = std::min(a.size(0), b.size(0));
  return {a.narrow(0, 0, frames), b.narrow(0, 0, frames)};
}

// Orthonormal DCT-II basis, [n, n], row k = coefficient k.
torch::Tensor dct_matrix(std::int64_t n) {
  auto k = torch::arange(n, torch::kFloat64).unsqueeze(1);
  auto i = torch::arange(n, torch::kFloat64).unsqueeze(0);
  auto basis = torch::cos(std::numbers::pi / static_cast<double>(n) * (i + 0.5) * k) *
               std::sqrt(2.0 / static_cast<double>(n));
  basis[0] *= std::sqrt(0.5);
  return basis;
}

}  // namespace

double mel_l1(const signal::Waveform& ref, const signal::Waveform& est, const signal::MelConfig& mel) {
  auto [a, b] = aligned_log_mels(ref, est, mel);
  return (a - b).abs().mean().item<double>();
}

double mel_cepstral_distortion(const signal::Waveform& ref, const signal::Waveform& est,
                               const signal::MelConfig& mel, int order) {
  if (order < 1 || order >= mel.n_mels) throw ArgumentError("MCD order must lie in [1, n_mels)");
  auto [a, b] = aligned_log_mels(ref, est, mel);
  const auto basis = dct_matrix(mel.n_mels).narrow(0, 1, order);
  auto diff = torch::matmul(a - b, basis.t());
  auto per_frame = torch::sqrt(2.0 * diff.square().sum(1)) * (10.0 / std::log(10.0));
  return per_frame.mean().item<double>();
}

double voiced_pitch_rmse(const signal::PitchTrack& ref, const signal::PitchTrack& est,
                         std::int64_t* shared_frames) {
  const auto frames = std::min(ref.frames(), est.frames());
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    if (!ref.voiced[t] || !est.voiced[t]) continue;
    const double d = static_cast<double>(ref.log_f0[t]) - static_cast<double>(est.log_f0[t]);
    sum += d * d;
    ++count;
  }
  if (shared_frames) *shared_frames = count;
  return count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
}

UtteranceMetrics compare(const std::string& id, const signal::Waveform& ref,
                         const signal::Waveform& est, const EvalSettings& settings) {
  UtteranceMetrics m;
  m.id = id;
  m.mel_l1 = mel_l1(ref, est, settings.mel);
  m.mcd = mel_cepstral_distortion(ref, est, settings.mel, settings.mcd_order);
  m.pitch_rmse = voiced_pitch_rmse(signal::extract_pitch(ref, settings.pitch_hop, settings.pitch),
                                   signal::extract_pitch(est, settings.pitch_hop, settings.pitch),
                                   &m.voiced_frames);
  return m;
}

signal::Waveform reconstruct(wavegan::WaveGan& model, const signal::Waveform& w,
                             torch::Generator& generator) {
  torch::NoGradGuard no_grad;
  auto post = model.encode(signal::to_tensor(w));
  auto z = wavegan::sample_latent(post, generator);
  auto y = model.decode(z)[0].narrow(0, 0, static_cast<std::int64_t>(w.size()));
  return signal::from_tensor(y.clamp(-1.0, 1.0), w.sample_rate);
}

ReconReport evaluate_reconstruction(wavegan::WaveGan& model,
                                    const std::vector<std::pair<std::string, signal::Waveform>>& set,
                                    const EvalSettings& settings, std::uint64_t seed) {
  model.train(false);
  auto generator = torch::make_generator<torch::CPUGeneratorImpl>(seed);
  std::vector<UtteranceMetrics> rows;
  rows.reserve(set.size());
  for (const auto& [id, w] : set) {
    rows.push_back(compare(id, w, reconstruct(model, w, generator), settings));
  }
  return summarize(std::move(rows));
}

ReconReport summarize(std::vector<UtteranceMetrics> utterances) {
  ReconReport r;
  r.utterances = std::move(utterances);
  std::size_t pitched = 0;
  for (const auto& u : r.utterances) {
    r.mean_mel_l1 += u.mel_l1;
    r.mean_mcd += u.mcd;
    if (u.voiced_frames > 0) {
      r.mean_pitch_rmse += u.pitch_rmse;
      ++pitched;
    }
  }
  if (!r.utterances.empty()) {
    r.mean_mel_l1 /= static_cast<double>(r.utterances.size());
    r.mean_mcd /= static_cast<double>(r.utterances.size());
  }
  if (pitched) r.mean_pitch_rmse /= static_cast<double>(pitched);
  return r;
}

void write_report(const std::filesystem::path& path, const ReconReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& u : report.utterances) {
    rows.push_back({{"id", u.id},
                    {"mel_l1", u.mel_l1},
                    {"mcd", u.mcd},
                    {"pitch_rmse", u.pitch_rmse},
                    {"voiced_frames", u.voiced_frames}});
  }
  nlohmann::json j{{"utterances", rows},
                   {"mean_mel_l1", report.mean_mel_l1},
                   {"mean_mcd", report.mean_mcd},
                   {"mean_pitch_rmse", report.mean_pitch_rmse}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace wavelatent::pipeline
