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

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/flow/flow.hpp"
#include "wavelatent/flow/mas.hpp"
#include "wavelatent/flow/text_encoder.hpp"

namespace wavelatent::flow {

struct DurationPredictorConfig {
  int channels = 256;
  int kernel_size = 3;
};

/// Two convolutions and a projection on (detached) text hidden states,
/// predicting log-durations [B, M].
class DurationPredictorImpl : public torch::nn::Module {
 public:
  DurationPredictorImpl(int in_channels, const DurationPredictorConfig& cfg);
  torch::Tensor forward(const torch::Tensor& hidden, const torch::Tensor& mask);

 private:
  torch::nn::Conv1d conv1_{nullptr};
  torch::nn::Conv1d conv2_{nullptr};
  torch::nn::Conv1d proj_{nullptr};
};
TORCH_MODULE(DurationPredictor);

struct AcousticModelConfig {
  int latent_dim = 256;
  TextEncoderConfig text;
  FlowConfig flow;
  DurationPredictorConfig duration;
  double temperature = 0.667;

  void validate() const;
};

/// Stored posterior statistics of one utterance plus its token sequence.
struct AcousticExample {
  torch::Tensor mu;         // [C, N]
  torch::Tensor log_sigma;  // [C, N]
  std::vector<std::int64_t> tokens;
};

struct AcousticLosses {
  torch::Tensor nll_per_dim;    // -(log p_C + logdet) / (sum N * C), true frames only
  torch::Tensor duration_loss;  // mean squared log-duration error per token
  torch::Tensor total;
  std::vector<Alignment> alignments;
};

struct SynthesizedLatents {
  torch::Tensor z;                 // [1, C, sum(durations)]
  std::vector<int> durations;      // per token, each >= 1
};

class AcousticModelImpl : public torch::nn::Module {
 public:
  explicit AcousticModelImpl(const AcousticModelConfig& cfg);

  const AcousticModelConfig& config() const { return cfg_; }

  /// Pads a batch of token sequences into [B, M] ids and [B] lengths.
  static std::pair<torch::Tensor, torch::Tensor> batch_tokens(
      const std::vector<std::vector<std::int64_t>>& sequences);

  TextEncoding encode_text(const std::vector<std::int64_t>& tokens);

  /// Negative log-likelihood of latents z [B, C, N] (per-item lengths)
  /// under the current parameters, with MAS alignments recomputed without
  /// gradient, plus the duration-predictor loss on those alignments.
  AcousticLosses compute_losses(const torch::Tensor& z, const torch::Tensor& z_lengths,
                                const torch::Tensor& tokens, const torch::Tensor& token_lengths);

  /// Predicts durations, expands the prior, samples c with standard
  /// deviation temperature * sigma and maps it through the inverse flow.
  /// Throws ArgumentError for an empty sequence or temperature <= 0.
  SynthesizedLatents synthesize_latents(const std::vector<std::int64_t>& tokens,
                                        double temperature, torch::Generator& generator);

  TextEncoder& text_encoder() { return text_; }
  FlowStack& flow() { return flow_; }
  DurationPredictor& duration_predictor() { return duration_; }

 private:
  AcousticModelConfig cfg_;
  TextEncoder text_{nullptr};
  FlowStack flow_{nullptr};
  DurationPredictor duration_{nullptr};
};
TORCH_MODULE(AcousticModel);

struct AcousticStepReport {
  double nll_per_dim = 0.0;
  double duration_loss = 0.0;
  double total = 0.0;
  std::vector<Alignment> alignments;
  bool applied = true;  // false when a non-finite loss aborted the update
};

/// One optimization step: draws z ~ N(mu, sigma) afresh for each example,
/// runs MAS under the current parameters, then takes a gradient step on the
/// likelihood and duration losses.
AcousticStepReport acoustic_train_step(AcousticModel& model, torch::optim::Optimizer& optimizer,
                                       const std::vector<const AcousticExample*>& batch,
                                       torch::Generator& generator);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DurationPredictorConfig, channels, kernel_size)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AcousticModelConfig, latent_dim, text, flow,
                                                duration, temperature)

}  // namespace wavelatent::flow
