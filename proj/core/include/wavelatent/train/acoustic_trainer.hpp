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

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "wavelatent/flow/acoustic_model.hpp"
#include "wavelatent/train/data.hpp"

namespace wavelatent::train {

struct AcousticTrainerConfig {
  flow::AcousticModelConfig model;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  int batch_size = 4;
  std::uint64_t seed = 1234;
};

inline constexpr const char* kAcousticCheckpointSchema = "wavelatent.acoustic-checkpoint/1";

class AcousticTrainer {
 public:
  AcousticTrainer(const AcousticTrainerConfig& cfg, std::vector<flow::AcousticExample> examples);

  /// Draws the next batch from the shuffled epoch order and takes one step.
  flow::AcousticStepReport train_step();

  const AcousticTrainerConfig& config() const { return cfg_; }
  std::int64_t step() const { return step_; }
  flow::AcousticModel& model() { return model_; }
  torch::Generator& generator() { return generator_; }

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  AcousticTrainerConfig cfg_;
  std::vector<flow::AcousticExample> examples_;
  flow::AcousticModel model_{nullptr};
  std::unique_ptr<torch::optim::Adam> optimizer_;
  EpochSampler sampler_;
  torch::Generator generator_;
  std::int64_t step_ = 0;
};

struct LoadedAcousticModel {
  AcousticTrainerConfig config;
  flow::AcousticModel model{nullptr};
  std::int64_t step = 0;
};
LoadedAcousticModel load_acoustic_for_inference(const std::filesystem::path& path);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AcousticTrainerConfig, model, learning_rate, beta1,
                                                beta2, batch_size, seed)

}  // namespace wavelatent::train
