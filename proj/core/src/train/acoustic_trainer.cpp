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

#include "wavelatent/train/acoustic_trainer.hpp"

#include <mutex>

#include "wavelatent/errors.hpp"
#include "wavelatent/train/checkpoint.hpp"

namespace wavelatent::train {

AcousticTrainer::AcousticTrainer(const AcousticTrainerConfig& cfg,
                                 std::vector<flow::AcousticExample> examples)
    : cfg_(cfg),
      examples_(std::move(examples)),
      sampler_(examples_.size(), static_cast<std::size_t>(std::max(cfg.batch_size, 1)), cfg.seed) {
  if (cfg_.batch_size <= 0) throw ArgumentError("batch_size must be positive");
  if (!(cfg_.learning_rate > 0.0)) throw ArgumentError("learning_rate must be positive");
  cfg_.model.validate();
  for (const auto& ex : examples_) {
    if (ex.mu.dim() != 2 || ex.mu.size(0) != cfg_.model.latent_dim) {
      throw ArgumentError("latent statistics must be [" + std::to_string(cfg_.model.latent_dim) +
                          ", frames]");
    }
  }
  torch::manual_seed(cfg_.seed);
  model_ = flow::AcousticModel(cfg_.model);
  model_->train(true);
  optimizer_ = std::make_unique<torch::optim::Adam>(
      model_->parameters(),
      torch::optim::AdamOptions(cfg_.learning_rate).betas({cfg_.beta1, cfg_.beta2}));
  generator_ = torch::make_generator<torch::CPUGeneratorImpl>(cfg_.seed);
}

flow::AcousticStepReport AcousticTrainer::train_step() {
  std::vector<const flow::AcousticExample*> batch;
  for (auto i : sampler_.next()) batch.push_back(&examples_[i]);
  auto report = flow::acoustic_train_step(model_, *optimizer_, batch, generator_);
  if (report.applied) ++step_;
  return report;
}

void AcousticTrainer::save(const std::filesystem::path& path) const {
  torch::serialize::OutputArchive archive, params, optim;
  write_string(archive, "schema", kAcousticCheckpointSchema);
  write_string(archive, "config", nlohmann::json(cfg_).dump());
  write_int(archive, "step", step_);
  model_->save(params);
  optimizer_->save(optim);
  archive.write("model", params);
  archive.write("optimizer", optim);
  write_string(archive, "sampler", sampler_.state());
  auto gen = generator_;
  {
    std::lock_guard<std::mutex> lock(gen.mutex());
    archive.write("rng", gen.get_state());
  }
  save_archive_atomically(archive, path);
}

void AcousticTrainer::load(const std::filesystem::path& path) {
  torch::serialize::InputArchive archive, params, optim;
  open_checkpoint(archive, path, kAcousticCheckpointSchema);
  AcousticTrainerConfig stored;
  try {
    stored = nlohmann::json::parse(read_string(archive, "config")).get<AcousticTrainerConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint config is unreadable: " + std::string(e.what()));
  }
  if (nlohmann::json(stored.model) != nlohmann::json(cfg_.model)) {
    throw VersionError("checkpoint " + path.string() + " was trained with a different architecture");
  }
  step_ = read_int(archive, "step");
  archive.read("model", params);
  archive.read("optimizer", optim);
  model_->load(params);
  optimizer_->load(optim);
  sampler_.restore(read_string(archive, "sampler"));
  torch::Tensor rng;
  archive.read("rng", rng);
  std::lock_guard<std::mutex> lock(generator_.mutex());
  generator_.set_state(rng);
}

LoadedAcousticModel load_acoustic_for_inference(const std::filesystem::path& path) {
  torch::serialize::InputArchive archive, params;
  open_checkpoint(archive, path, kAcousticCheckpointSchema);
  LoadedAcousticModel out;
  try {
    out.config = nlohmann::json::parse(read_string(archive, "config")).get<AcousticTrainerConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint config is unreadable: " + std::string(e.what()));
  }
  out.config.model.validate();
  out.step = read_int(archive, "step");
  out.model = flow::AcousticModel(out.config.model);
  archive.read("model", params);
  out.model->load(params);
  out.model->train(false);
  return out;
}

}  // namespace wavelatent::train
