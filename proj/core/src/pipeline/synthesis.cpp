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

#include "wavelatent/pipeline/synthesis.hpp"

#include <algorithm>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {

signal::Waveform clip_to_unit(signal::Waveform w) {
  for (auto& s : w.samples) s = std::clamp(s, -1.0f, 1.0f);
  return w;
}

Synthesizer::Synthesizer(train::LoadedAcousticModel acoustic, train::LoadedWaveGan vocoder)
    : acoustic_(std::move(acoustic)), vocoder_(std::move(vocoder)) {
  if (vocoder_.config.inner_gan) {
    throw VersionError("the waveform checkpoint is mel-conditioned and cannot decode latents");
  }
  const int latent = acoustic_.config.model.latent_dim;
  const int decoder_in = vocoder_.model->config().decoder.input_channels;
  if (latent != decoder_in) {
    throw VersionError("acoustic model emits " + std::to_string(latent) +
                       "-channel latents but the decoder expects " + std::to_string(decoder_in));
  }
}

SynthesisOutput Synthesizer::synthesize(const std::vector<std::int64_t>& tokens, double temperature,
                                        std::uint64_t seed) {
  if (tokens.empty()) throw ArgumentError("nothing to synthesize: empty token sequence");
  torch::NoGradGuard no_grad;
  auto generator = torch::make_generator<torch::CPUGeneratorImpl>(seed);
  auto latents = acoustic_.model->synthesize_latents(tokens, temperature, generator);
  auto audio = vocoder_.model->decode(latents.z)[0].clamp(-1.0, 1.0);
  return {signal::from_tensor(audio, sample_rate()), std::move(latents.durations)};
}

}  // namespace wavelatent::pipeline
