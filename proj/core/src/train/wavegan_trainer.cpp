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

#include "wavelatent/train/wavegan_trainer.hpp"

#include <cmath>
#include <fstream>
#include <mutex>

#include "wavelatent/adversary/losses.hpp"
#include "wavelatent/errors.hpp"
#include "wavelatent/signal/stft_loss.hpp"
#include "wavelatent/train/checkpoint.hpp"
#include "wavelatent/wavegan/losses.hpp"

namespace wavelatent::train {
namespace {

const char* const kGeneratorParts[] = {"encoder", "decoder", "pitch"};

wavegan::WaveGanConfig effective_model_config(const WaveGanTrainerConfig& cfg) {
  return cfg.inner_gan ? wavegan::inner_gan_config(cfg.model, cfg.inner_gan_mel.n_mels) : cfg.model;
}

// Architecture-defining subset of the configuration; a checkpoint can only
// be restored into a trainer whose subset matches exactly.
nlohmann::json architecture_of(const WaveGanTrainerConfig& cfg) {
  return {{"sample_rate", cfg.sample_rate},
          {"model", cfg.model},
          {"discriminator", cfg.discriminator},
          {"inner_gan", cfg.inner_gan},
          {"inner_gan_mel", cfg.inner_gan_mel}};
}

torch::nn::Module* part(wavegan::WaveGan& model, const std::string& name) {
  if (name == "encoder") return model.encoder() ? model.encoder().get() : nullptr;
  if (name == "decoder") return model.decoder().get();
  return model.pitch_predictor() ? model.pitch_predictor().get() : nullptr;
}

std::vector<torch::Tensor> part_parameters(const wavegan::WaveGan& model, const std::string& name) {
  if (name == "encoder") return model.encoder_parameters();
  if (name == "decoder") return model.decoder_parameters();
  return model.pitch_parameters();
}

torch::Tensor generator_state(torch::Generator& gen) {
  std::lock_guard<std::mutex> lock(gen.mutex());
  return gen.get_state();
}

void set_generator_state(torch::Generator& gen, const torch::Tensor& state) {
  std::lock_guard<std::mutex> lock(gen.mutex());
  gen.set_state(state);
}

bool all_finite(const std::vector<torch::Tensor>& grads) {
  for (const auto& g : grads) {
    if (g.defined() && !torch::isfinite(g).all().item<bool>()) return false;
  }
  return true;
}

void assign_grads(const std::vector<torch::Tensor>& params, const std::vector<torch::Tensor>& grads) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i];
    p.mutable_grad() = grads[i].defined() ? grads[i] : torch::zeros_like(p);
  }
}

void set_learning_rate(torch::optim::Adam& opt, double lr) {
  for (auto& group : opt.param_groups()) {
    static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);
  }
}

}  // namespace

void LossWeights::validate() const {
  for (double w : {kl, pitch, recons, adv_g, fm}) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("loss weights must be finite and >= 0");
  }
}

void WaveGanTrainerConfig::validate() const {
  if (sample_rate <= 0) throw ArgumentError("sample_rate must be positive");
  if (batch_size <= 0) throw ArgumentError("batch_size must be positive");
  weights.validate();
  if (!(optimizer.learning_rate > 0.0) || !(optimizer.lr_decay > 0.0)) {
    throw ArgumentError("learning rate and decay must be positive");
  }
  const auto model_cfg = effective_model_config(*this);
  if (!inner_gan) model_cfg.validate();
  discriminator.validate();
  const int hop = model_cfg.decoder.total_factor();
  if (segment_samples <= 0 || segment_samples % hop != 0) {
    throw ArgumentError("segment_samples must be a positive multiple of the hop (" +
                        std::to_string(hop) + ")");
  }
  if (segment_samples < discriminator.min_samples()) {
    throw ArgumentError("segment_samples is shorter than the widest discriminator window");
  }
  for (const auto& r : resolutions()) {
    r.validate();
    if (segment_samples <= r.fft_size / 2) {
      throw ArgumentError("segment_samples too short for STFT resolution " + std::to_string(r.fft_size));
    }
  }
  if (inner_gan) {
    inner_gan_mel.spectral.validate();
    if (inner_gan_mel.spectral.hop_size != hop) {
      throw ArgumentError("mel conditioning hop must equal the decoder hop");
    }
  }
}

const std::vector<signal::SpectralConfig>& WaveGanTrainerConfig::resolutions() const {
  static const std::vector<signal::SpectralConfig> defaults = signal::default_stft_resolutions();
  return stft_resolutions.empty() ? defaults : stft_resolutions;
}

WaveGanTrainer::WaveGanTrainer(const WaveGanTrainerConfig& cfg)
    : cfg_(cfg), lr_(cfg.optimizer.learning_rate) {
  cfg_.validate();
  torch::manual_seed(cfg_.seed);
  model_ = std::make_unique<wavegan::WaveGan>(effective_model_config(cfg_), cfg_.inner_gan);
  disc_ = adversary::DiscriminatorBank(cfg_.discriminator, cfg_.sample_rate);
  generator_ = torch::make_generator<torch::CPUGeneratorImpl>(cfg_.seed);

  auto options = torch::optim::AdamOptions(lr_).betas({cfg_.optimizer.beta1, cfg_.optimizer.beta2});
  for (const char* name : kGeneratorParts) {
    auto params = part_parameters(*model_, name);
    gen_optimizers_.push_back(params.empty() ? nullptr
                                             : std::make_unique<torch::optim::Adam>(params, options));
  }
  disc_optimizer_ = std::make_unique<torch::optim::Adam>(disc_->parameters(), options);
  model_->train(true);
  disc_->train(true);
}

StepLosses WaveGanTrainer::train_step(const TrainingBatch& batch) {
  StepLosses out;
  const auto rng_before = generator_state(generator_);
  const auto& x = batch.audio;
  if (x.dim() != 2 || x.size(1) != cfg_.segment_samples) {
    throw ArgumentError("batch audio must be [B, " + std::to_string(cfg_.segment_samples) + "]");
  }

  torch::Tensor x_hat;
  torch::Tensor kl, pitch;
  if (cfg_.inner_gan) {
    if (!batch.mel.defined()) throw ArgumentError("mel-conditioned training needs batch.mel");
    x_hat = model_->decode(batch.mel);
  } else {
    auto post = model_->encode(x);
    auto z = wavegan::sample_latent(post, generator_);
    x_hat = model_->decode(z);
    kl = wavegan::kl_loss(post);
    auto pl = wavegan::pitch_loss(model_->predict_pitch(z), batch.log_f0, batch.voiced);
    pitch = pl.value;
    out.pitch_has_voiced = pl.has_voiced;
  }

  auto recons = signal::multi_resolution_stft_loss(x, x_hat, cfg_.resolutions());
  auto real = disc_->forward(x);
  auto fake = disc_->forward(x_hat);
  auto adv_g = adversary::lsgan_generator_loss(fake);
  auto fm = adversary::feature_matching_loss(real, fake);
  auto adv_d = adversary::lsgan_discriminator_loss(real, fake);

  const auto& w = cfg_.weights;
  auto total = w.recons * recons + w.adv_g * adv_g + w.fm * fm;
  if (!cfg_.inner_gan) total = total + w.kl * kl + w.pitch * pitch;

  out.recons = recons.item<double>();
  out.adv_g = adv_g.item<double>();
  out.fm = fm.item<double>();
  out.adv_d = adv_d.item<double>();
  out.generator_total = total.item<double>();
  if (!cfg_.inner_gan) {
    out.kl = kl.item<double>();
    out.pitch = pitch.item<double>();
  }

  auto abort = [&](const std::string& why) {
    set_generator_state(generator_, rng_before);
    out.applied = false;
    out.diagnostic = why + " at step " + std::to_string(step_ + 1);
    return out;
  };
  for (double v : {out.kl, out.pitch, out.recons, out.adv_g, out.fm, out.adv_d}) {
    if (!std::isfinite(v)) return abort("non-finite loss");
  }

  // Each parameter set is differentiated only against its own objective.
  const auto disc_params = disc_->parameters();
  std::vector<torch::Tensor> gen_params;
  for (const char* name : kGeneratorParts) {
    auto p = part_parameters(*model_, name);
    gen_params.insert(gen_params.end(), p.begin(), p.end());
  }
  auto disc_grads = torch::autograd::grad({adv_d}, disc_params, {}, /*retain_graph=*/true,
                                          /*create_graph=*/false, /*allow_unused=*/true);
  auto gen_grads = torch::autograd::grad({total}, gen_params, {}, /*retain_graph=*/false,
                                         /*create_graph=*/false, /*allow_unused=*/true);
  if (!all_finite(disc_grads) || !all_finite(gen_grads)) return abort("non-finite gradient");

  assign_grads(disc_params, disc_grads);
  assign_grads(gen_params, gen_grads);
  disc_optimizer_->step();
  for (auto& opt : gen_optimizers_) {
    if (opt) opt->step();
  }
  ++step_;
  return out;
}

void WaveGanTrainer::end_epoch() {
  lr_ *= cfg_.optimizer.lr_decay;
  set_learning_rate(*disc_optimizer_, lr_);
  for (auto& opt : gen_optimizers_) {
    if (opt) set_learning_rate(*opt, lr_);
  }
}

void WaveGanTrainer::save(const std::filesystem::path& path, const std::string& extras) const {
  auto* self = const_cast<WaveGanTrainer*>(this);
  torch::serialize::OutputArchive archive;
  write_string(archive, "schema", kWaveGanCheckpointSchema);
  write_string(archive, "config", nlohmann::json(cfg_).dump());
  write_int(archive, "step", step_);
  archive.write("learning_rate", c10::IValue(lr_));
  for (std::size_t i = 0; i < 3; ++i) {
    auto* module = part(*self->model_, kGeneratorParts[i]);
    if (!module) continue;
    torch::serialize::OutputArchive params, optim;
    module->save(params);
    gen_optimizers_[i]->save(optim);
    archive.write(std::string("generator.") + kGeneratorParts[i], params);
    archive.write(std::string("optimizer.") + kGeneratorParts[i], optim);
  }
  torch::serialize::OutputArchive disc, disc_optim;
  disc_->save(disc);
  disc_optimizer_->save(disc_optim);
  archive.write("discriminator", disc);
  archive.write("optimizer.discriminator", disc_optim);
  archive.write("rng", generator_state(self->generator_));
  write_string(archive, "extras", extras);
  save_archive_atomically(archive, path);
}

std::string WaveGanTrainer::load(const std::filesystem::path& path) {
  torch::serialize::InputArchive archive;
  open_checkpoint(archive, path, kWaveGanCheckpointSchema);
  WaveGanTrainerConfig stored;
  try {
    stored = nlohmann::json::parse(read_string(archive, "config")).get<WaveGanTrainerConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint config is unreadable: " + std::string(e.what()));
  }
  if (architecture_of(stored) != architecture_of(cfg_)) {
    throw VersionError("checkpoint " + path.string() + " was trained with a different architecture");
  }
  step_ = read_int(archive, "step");
  c10::IValue lr;
  if (!archive.try_read("learning_rate", lr) || !lr.isDouble()) {
    throw FormatError("checkpoint is missing 'learning_rate'");
  }
  lr_ = lr.toDouble();
  for (std::size_t i = 0; i < 3; ++i) {
    auto* module = part(*model_, kGeneratorParts[i]);
    if (!module) continue;
    torch::serialize::InputArchive params, optim;
    archive.read(std::string("generator.") + kGeneratorParts[i], params);
    archive.read(std::string("optimizer.") + kGeneratorParts[i], optim);
    module->load(params);
    gen_optimizers_[i]->load(optim);
  }
  torch::serialize::InputArchive disc, disc_optim;
  archive.read("discriminator", disc);
  archive.read("optimizer.discriminator", disc_optim);
  disc_->load(disc);
  disc_optimizer_->load(disc_optim);
  torch::Tensor rng;
  archive.read("rng", rng);
  set_generator_state(generator_, rng);
  set_learning_rate(*disc_optimizer_, lr_);
  for (auto& opt : gen_optimizers_) {
    if (opt) set_learning_rate(*opt, lr_);
  }
  return read_string(archive, "extras");
}

LoadedWaveGan load_wavegan_for_inference(const std::filesystem::path& path) {
  torch::serialize::InputArchive archive;
  open_checkpoint(archive, path, kWaveGanCheckpointSchema);
  LoadedWaveGan out;
  try {
    out.config = nlohmann::json::parse(read_string(archive, "config")).get<WaveGanTrainerConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint config is unreadable: " + std::string(e.what()));
  }
  out.step = read_int(archive, "step");
  out.model = std::make_unique<wavegan::WaveGan>(effective_model_config(out.config),
                                                 out.config.inner_gan);
  for (const char* name : kGeneratorParts) {
    auto* module = part(*out.model, name);
    if (!module) continue;
    torch::serialize::InputArchive params;
    archive.read(std::string("generator.") + name, params);
    module->load(params);
  }
  out.model->train(false);
  return out;
}

void write_step_metrics(MetricsLog& log, std::int64_t step, const StepLosses& losses,
                        bool inner_gan) {
  if (!inner_gan) {
    log.write(step, "kl", losses.kl);
    log.write(step, "pitch", losses.pitch);
  }
  log.write(step, "recons", losses.recons);
  log.write(step, "adv_g", losses.adv_g);
  log.write(step, "fm", losses.fm);
  log.write(step, "adv_d", losses.adv_d);
  log.write(step, "generator_total", losses.generator_total);
}

void run_wavegan_training(WaveGanTrainer& trainer, SegmentSampler& sampler,
                          const TrainingLoopOptions& options) {
  auto epoch = sampler.epoch();
  for (std::int64_t i = 0; i < options.steps; ++i) {
    auto batch = sampler.next();
    for (; epoch < sampler.epoch(); ++epoch) trainer.end_epoch();
    auto losses = trainer.train_step(batch);
    if (losses.applied && options.metrics) {
      write_step_metrics(*options.metrics, trainer.step(), losses, trainer.config().inner_gan);
    }
    if (options.on_step) options.on_step(trainer.step(), losses);
    if (losses.applied && options.checkpoint_interval > 0 && !options.checkpoint_path.empty() &&
        trainer.step() % options.checkpoint_interval == 0) {
      trainer.save(options.checkpoint_path, sampler.state());
    }
  }
  if (options.metrics) options.metrics->flush();
  if (!options.checkpoint_path.empty()) trainer.save(options.checkpoint_path, sampler.state());
}

PitchAblationResult stop_gradient_pitch_experiment(const std::vector<TrainingUtterance>& corpus,
                                                   std::int64_t steps,
                                                   const WaveGanTrainerConfig& cfg) {
  if (cfg.inner_gan) throw ArgumentError("the pitch experiment needs the latent model");
  PitchAblationResult result;
  for (bool stop : {false, true}) {
    auto variant = cfg;
    variant.model.stop_gradient_pitch = stop;
    WaveGanTrainer trainer(variant);
    SegmentSampler sampler(corpus, variant.segment_samples, trainer.model().hop_size(),
                           static_cast<std::size_t>(variant.batch_size), variant.seed);
    auto& curve = stop ? result.stop_gradient : result.with_gradient;
    TrainingLoopOptions options;
    options.steps = steps;
    options.on_step = [&curve](std::int64_t, const StepLosses& l) {
      if (l.applied) curve.push_back(l.pitch);
    };
    run_wavegan_training(trainer, sampler, options);
  }
  return result;
}

void write_pitch_curves(const std::filesystem::path& path, const PitchAblationResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write pitch curves: " + path.string());
  auto emit = [&out](const char* variant, const std::vector<double>& curve) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
      nlohmann::json record{{"step", i + 1}, {"variant", variant}, {"pitch_loss", curve[i]}};
      out << record.dump() << '\n';
    }
  };
  emit("with_gradient", result.with_gradient);
  emit("stop_gradient", result.stop_gradient);
}

void to_json(nlohmann::json& j, const WaveGanTrainerConfig& c) {
  j = nlohmann::json{{"sample_rate", c.sample_rate},
                     {"model", c.model},
                     {"discriminator", c.discriminator},
                     {"weights", c.weights},
                     {"optimizer", c.optimizer},
                     {"batch_size", c.batch_size},
                     {"segment_samples", c.segment_samples},
                     {"stft_resolutions", c.stft_resolutions},
                     {"inner_gan", c.inner_gan},
                     {"inner_gan_mel", c.inner_gan_mel},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, WaveGanTrainerConfig& c) {
  c = WaveGanTrainerConfig{};
  c.sample_rate = j.value("sample_rate", c.sample_rate);
  if (j.contains("model")) c.model = j.at("model").get<wavegan::WaveGanConfig>();
  if (j.contains("discriminator")) {
    c.discriminator = j.at("discriminator").get<adversary::DiscriminatorBankConfig>();
  }
  if (j.contains("weights")) c.weights = j.at("weights").get<LossWeights>();
  if (j.contains("optimizer")) c.optimizer = j.at("optimizer").get<OptimizerConfig>();
  c.batch_size = j.value("batch_size", c.batch_size);
  c.segment_samples = j.value("segment_samples", c.segment_samples);
  if (j.contains("stft_resolutions")) {
    c.stft_resolutions = j.at("stft_resolutions").get<std::vector<signal::SpectralConfig>>();
  }
  c.inner_gan = j.value("inner_gan", c.inner_gan);
  if (j.contains("inner_gan_mel")) c.inner_gan_mel = j.at("inner_gan_mel").get<signal::MelConfig>();
  c.seed = j.value("seed", c.seed);
}

}  // namespace wavelatent::train
