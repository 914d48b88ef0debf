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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/adversary/discriminator.hpp"
#include "wavelatent/signal/spectral.hpp"
#include "wavelatent/train/data.hpp"
#include "wavelatent/train/metrics_log.hpp"
#include "wavelatent/wavegan/model.hpp"

namespace wavelatent::train {

/// Weights of the full generator objective
/// kl * L_kl + pitch * L_pitch + recons * L_recons + adv_g * L_adv_g + fm * L_fm.
struct LossWeights {
  double kl = 10.0;
  double pitch = 1.0;
  double recons = 1.0;
  double adv_g = 1.0;
  double fm = 20.0;

  void validate() const;
};

struct OptimizerConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double lr_decay = 0.999;  // multiplied in once per epoch
};

struct WaveGanTrainerConfig {
  int sample_rate = 22050;
  wavegan::WaveGanConfig model;
  adversary::DiscriminatorBankConfig discriminator = adversary::DiscriminatorBankConfig::defaults();
  LossWeights weights;
  OptimizerConfig optimizer;
  int batch_size = 16;
  int segment_samples = 8192;
  std::vector<signal::SpectralConfig> stft_resolutions;  // empty selects the defaults
  // Mel-conditioned decoder without encoder, KL or pitch head (Inner-GAN).
  bool inner_gan = false;
  signal::MelConfig inner_gan_mel{{1024, 256, 1024, signal::WindowKind::kHann}, 80, 0.0, 0.0};
  std::uint64_t seed = 1234;

  void validate() const;
  const std::vector<signal::SpectralConfig>& resolutions() const;
};

/// Scalar values of one step. The discriminator loss is evaluated before
/// either update is applied.
struct StepLosses {
  double kl = 0.0;
  double pitch = 0.0;
  double recons = 0.0;
  double adv_g = 0.0;
  double fm = 0.0;
  double adv_d = 0.0;
  double generator_total = 0.0;
  bool pitch_has_voiced = false;
  bool applied = true;
  std::string diagnostic;  // set when the step was aborted
};

/// Trains the waveform VAE against the spectrum discriminators.
///
/// Each step runs one forward pass and partitions gradients by parameter
/// set: the discriminators receive only grad(L_adv_d); the encoder,
/// decoder and pitch predictor receive grad of the weighted generator
/// objective, in which the decoder is reached only by L_recons, L_adv_g and
/// L_fm and the pitch predictor only by L_pitch. The discriminator update is
/// applied first, then the generator-side updates. A non-finite loss aborts
/// the step without touching parameters or optimizer state.
class WaveGanTrainer {
 public:
  explicit WaveGanTrainer(const WaveGanTrainerConfig& cfg);

  StepLosses train_step(const TrainingBatch& batch);

  /// Scales every learning rate by lr_decay.
  void end_epoch();

  const WaveGanTrainerConfig& config() const { return cfg_; }
  std::int64_t step() const { return step_; }
  double learning_rate() const { return lr_; }
  wavegan::WaveGan& model() { return *model_; }
  adversary::DiscriminatorBank& discriminator() { return disc_; }
  torch::Generator& generator() { return generator_; }

  /// Writes parameters, optimizer state, step counter, RNG state and config.
  /// `extras` is stored verbatim (e.g. the data sampler state).
  void save(const std::filesystem::path& path, const std::string& extras = "") const;

  /// Restores a checkpoint written by save(); returns its extras. Throws
  /// VersionError when the schema or model configuration differs.
  std::string load(const std::filesystem::path& path);

 private:
  WaveGanTrainerConfig cfg_;
  std::unique_ptr<wavegan::WaveGan> model_;
  adversary::DiscriminatorBank disc_{nullptr};
  std::vector<std::unique_ptr<torch::optim::Adam>> gen_optimizers_;  // encoder, decoder, pitch
  std::unique_ptr<torch::optim::Adam> disc_optimizer_;
  torch::Generator generator_;
  std::int64_t step_ = 0;
  double lr_;
};

inline constexpr const char* kWaveGanCheckpointSchema = "wavelatent.wavegan-checkpoint/1";

/// Loads only the generator side (encoder, decoder, pitch head) of a
/// checkpoint for inference, skipping discriminators and optimizer state.
struct LoadedWaveGan {
  WaveGanTrainerConfig config;
  std::unique_ptr<wavegan::WaveGan> model;
  std::int64_t step = 0;
};
LoadedWaveGan load_wavegan_for_inference(const std::filesystem::path& path);

struct TrainingLoopOptions {
  std::int64_t steps = 0;
  std::int64_t checkpoint_interval = 0;  // 0 disables periodic checkpoints
  std::filesystem::path checkpoint_path;
  MetricsLog* metrics = nullptr;
  std::function<void(std::int64_t, const StepLosses&)> on_step;
};

/// Runs `steps` further steps, decaying the learning rate at epoch
/// boundaries and checkpointing (with the sampler state) on the interval.
void run_wavegan_training(WaveGanTrainer& trainer, SegmentSampler& sampler,
                          const TrainingLoopOptions& options);

void write_step_metrics(MetricsLog& log, std::int64_t step, const StepLosses& losses,
                        bool inner_gan);

struct PitchAblationResult {
  std::vector<double> with_gradient;
  std::vector<double> stop_gradient;
};

/// Trains two otherwise identical models (same seed, same data order), one
/// with the pitch predictor input detached, and records L_pitch per step.
PitchAblationResult stop_gradient_pitch_experiment(const std::vector<TrainingUtterance>& corpus,
                                                   std::int64_t steps,
                                                   const WaveGanTrainerConfig& cfg);

/// Step/value records {"step", "variant", "pitch_loss"}, one per line.
void write_pitch_curves(const std::filesystem::path& path, const PitchAblationResult& result);

void to_json(nlohmann::json& j, const WaveGanTrainerConfig& c);
void from_json(const nlohmann::json& j, WaveGanTrainerConfig& c);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LossWeights, kl, pitch, recons, adv_g, fm)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OptimizerConfig, learning_rate, beta1, beta2, lr_decay)

}  // namespace wavelatent::train
