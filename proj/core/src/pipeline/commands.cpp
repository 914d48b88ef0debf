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

#include "wavelatent/pipeline/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "wavelatent/errors.hpp"
#include "wavelatent/pipeline/latent_cache.hpp"
#include "wavelatent/pipeline/manifest.hpp"
#include "wavelatent/signal/wav_io.hpp"
#include "wavelatent/train/acoustic_trainer.hpp"
#include "wavelatent/train/metrics_log.hpp"
#include "wavelatent/version.hpp"

namespace wavelatent::pipeline {
namespace {

constexpr std::int64_t kLogEvery = 100;

void require_file(const std::filesystem::path& p, const std::string& what) {
  if (!std::filesystem::exists(p)) throw IoError(what + " not found: " + p.string());
}

// The stored model must be the one the config describes.
train::LoadedWaveGan load_matching_wavegan(const PipelineConfig& cfg) {
  require_file(cfg.wavegan_checkpoint(), "waveform checkpoint");
  auto loaded = train::load_wavegan_for_inference(cfg.wavegan_checkpoint());
  if (loaded.config.sample_rate != cfg.sample_rate ||
      nlohmann::json(loaded.config.model) != nlohmann::json(cfg.wavegan.model) ||
      loaded.config.inner_gan != cfg.wavegan.inner_gan) {
    throw VersionError("waveform checkpoint " + cfg.wavegan_checkpoint().string() +
                       " does not match the configured model");
  }
  return loaded;
}

std::vector<std::pair<std::string, signal::Waveform>> evaluation_set(const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, signal::Waveform>> set;
  if (!cfg.eval_manifest.empty()) {
    auto manifest = read_manifest(cfg.eval_manifest);
    std::sort(manifest.rows.begin(), manifest.rows.end(),
              [](const ManifestRow& a, const ManifestRow& b) { return a.id < b.id; });
    for (const auto& row : manifest.rows) set.emplace_back(row.id, ingest_audio(row.audio, cfg.sample_rate));
    return set;
  }
  auto dataset = Dataset::open(cfg.data_dir());
  for (const auto& r : dataset.utterances()) set.emplace_back(r.id, dataset.load_audio(r));
  return set;
}

}  // namespace

Vocabulary load_vocabulary(const PipelineConfig& cfg) {
  auto vocab = cfg.vocabulary.empty() ? Vocabulary(RuleBasedTokenizer::inventory())
                                      : Vocabulary::load(cfg.vocabulary);
  if (static_cast<int>(vocab.size()) > cfg.acoustic.model.text.vocab_size) {
    throw ArgumentError("vocabulary has " + std::to_string(vocab.size()) +
                        " tokens but the text encoder holds " +
                        std::to_string(cfg.acoustic.model.text.vocab_size));
  }
  return vocab;
}

void write_run_record(const PipelineConfig& cfg, const std::string& command,
                      const nlohmann::json& inputs) {
  std::filesystem::create_directories(cfg.runs_dir());
  nlohmann::json record{{"command", command},
                        {"version", kVersion},
                        {"seed", cfg.seed},
                        {"config", cfg},
                        {"inputs", inputs}};
  std::ofstream out(cfg.runs_dir() / (command + ".json"), std::ios::trunc);
  if (!out) throw IoError("cannot write run record under " + cfg.runs_dir().string());
  out << record.dump(2) << '\n';
}

DatasetSummary run_prepare_data(const PipelineConfig& cfg) {
  cfg.validate();
  require_file(cfg.manifest, "manifest");
  RuleBasedTokenizer tokenizer;
  auto vocab = load_vocabulary(cfg);
  std::filesystem::create_directories(cfg.work_dir);
  auto summary = prepare_data(cfg, tokenizer, vocab);
  vocab.save(cfg.data_dir() / "vocabulary.txt");
  write_run_record(cfg, "prepare-data", {{"manifest", cfg.manifest.string()}});
  return summary;
}

void run_train_wavegan(const PipelineConfig& cfg, bool resume, std::ostream& log) {
  cfg.validate();
  auto dataset = Dataset::open(cfg.data_dir());
  if (dataset.size() == 0) throw ArgumentError("the prepared dataset is empty");
  const auto corpus = dataset.training_corpus();

  train::WaveGanTrainer trainer(cfg.wavegan);
  train::SegmentSampler sampler(corpus, cfg.wavegan.segment_samples, trainer.model().hop_size(),
                                static_cast<std::size_t>(cfg.wavegan.batch_size), cfg.seed);
  if (cfg.wavegan.inner_gan) sampler.enable_mel(cfg.sample_rate, cfg.wavegan.inner_gan_mel);
  if (resume) {
    require_file(cfg.wavegan_checkpoint(), "waveform checkpoint");
    sampler.restore(trainer.load(cfg.wavegan_checkpoint()));
  }
  train::MetricsLog metrics(cfg.work_dir / "wavegan_metrics.jsonl", resume);
  train::TrainingLoopOptions options;
  options.steps = cfg.wavegan_steps;
  options.checkpoint_interval = cfg.checkpoint_interval;
  options.checkpoint_path = cfg.wavegan_checkpoint();
  options.metrics = &metrics;
  options.on_step = [&log](std::int64_t step, const train::StepLosses& l) {
    if (!l.applied) {
      log << "warning: " << l.diagnostic << "; step skipped\n";
    } else if (step % kLogEvery == 0) {
      log << "step " << step << " recons " << l.recons << " adv_g " << l.adv_g << " fm " << l.fm
          << " adv_d " << l.adv_d << " kl " << l.kl << " pitch " << l.pitch << '\n';
    }
  };
  run_wavegan_training(trainer, sampler, options);
  write_run_record(cfg, "train-wavegan",
                   {{"resume", resume}, {"final_step", trainer.step()}, {"utterances", corpus.size()}});
}

std::size_t run_extract_stats(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.wavegan.inner_gan) throw ArgumentError("a mel-conditioned model has no latent space");
  auto loaded = load_matching_wavegan(cfg);
  auto dataset = Dataset::open(cfg.data_dir());
  const auto count = extract_latent_stats(*loaded.model, dataset, cfg.latent_dir());
  write_run_record(cfg, "extract-stats", {{"checkpoint_step", loaded.step}, {"entries", count}});
  return count;
}

void run_train_acoustic(const PipelineConfig& cfg, bool resume, std::ostream& log) {
  cfg.validate();
  std::vector<flow::AcousticExample> examples;
  for (const auto& e : load_latent_cache(cfg.latent_dir())) {
    if (e.mu.size(0) != cfg.acoustic.model.latent_dim) {
      throw VersionError("latent cache holds " + std::to_string(e.mu.size(0)) +
                         "-channel entries; the acoustic model expects " +
                         std::to_string(cfg.acoustic.model.latent_dim));
    }
    if (e.frames() < static_cast<std::int64_t>(e.tokens.size())) {
      log << "warning: " << e.id << " has fewer frames than tokens; skipped\n";
      continue;
    }
    examples.push_back({e.mu, e.log_sigma, e.tokens});
  }
  if (examples.empty()) throw ArgumentError("no usable latent entries");

  const auto count = examples.size();
  train::AcousticTrainer trainer(cfg.acoustic, std::move(examples));
  if (resume) {
    require_file(cfg.acoustic_checkpoint(), "acoustic checkpoint");
    trainer.load(cfg.acoustic_checkpoint());
  }
  train::MetricsLog metrics(cfg.work_dir / "acoustic_metrics.jsonl", resume);
  for (std::int64_t i = 0; i < cfg.acoustic_steps; ++i) {
    auto report = trainer.train_step();
    if (!report.applied) {
      log << "warning: non-finite acoustic loss at step " << trainer.step() + 1 << "; step skipped\n";
      continue;
    }
    metrics.write(trainer.step(), "nll_per_dim", report.nll_per_dim);
    metrics.write(trainer.step(), "duration", report.duration_loss);
    metrics.write(trainer.step(), "total", report.total);
    if (trainer.step() % kLogEvery == 0) {
      log << "step " << trainer.step() << " nll/dim " << report.nll_per_dim << " duration "
          << report.duration_loss << '\n';
    }
    if (cfg.checkpoint_interval > 0 && trainer.step() % cfg.checkpoint_interval == 0) {
      trainer.save(cfg.acoustic_checkpoint());
    }
  }
  metrics.flush();
  trainer.save(cfg.acoustic_checkpoint());
  write_run_record(cfg, "train-acoustic",
                   {{"resume", resume}, {"final_step", trainer.step()}, {"utterances", count}});
}

SynthesisOutput run_synthesize(const PipelineConfig& cfg, const std::string& text,
                               const std::filesystem::path& output, double temperature) {
  cfg.validate();
  RuleBasedTokenizer tokenizer;
  const auto tokens = tokenize(tokenizer, load_vocabulary(cfg), text);
  require_file(cfg.acoustic_checkpoint(), "acoustic checkpoint");
  auto acoustic = train::load_acoustic_for_inference(cfg.acoustic_checkpoint());
  auto vocoder = load_matching_wavegan(cfg);
  Synthesizer synth(std::move(acoustic), std::move(vocoder));
  auto out = synth.synthesize(tokens, temperature, cfg.seed);
  signal::save_waveform(output, out.audio, signal::WavEncoding::kPcm16);
  write_run_record(cfg, "synthesize",
                   {{"text", text},
                    {"tokens", tokens},
                    {"temperature", temperature},
                    {"output", output.string()},
                    {"durations", out.durations}});
  return out;
}

void run_reconstruct(const PipelineConfig& cfg, const std::filesystem::path& input,
                     const std::filesystem::path& output) {
  cfg.validate();
  if (cfg.wavegan.inner_gan) throw ArgumentError("reconstruction needs the latent model");
  auto loaded = load_matching_wavegan(cfg);
  auto w = ingest_audio(input, cfg.sample_rate);
  auto generator = torch::make_generator<torch::CPUGeneratorImpl>(cfg.seed);
  loaded.model->train(false);
  signal::save_waveform(output, reconstruct(*loaded.model, w, generator),
                        signal::WavEncoding::kPcm16);
  write_run_record(cfg, "reconstruct", {{"input", input.string()}, {"output", output.string()}});
}

ReconReport run_eval_recon(const PipelineConfig& cfg, const std::filesystem::path& report_path) {
  cfg.validate();
  if (cfg.wavegan.inner_gan) throw ArgumentError("copy-synthesis evaluation needs the latent model");
  auto loaded = load_matching_wavegan(cfg);
  EvalSettings settings;
  settings.mel = cfg.eval_mel;
  settings.mcd_order = cfg.mcd_order;
  settings.pitch = cfg.pitch;
  settings.pitch_hop = cfg.wavegan.model.hop_size();
  auto report = evaluate_reconstruction(*loaded.model, evaluation_set(cfg), settings, cfg.seed);
  write_report(report_path, report);
  write_run_record(cfg, "eval-recon",
                   {{"report", report_path.string()}, {"eval_manifest", cfg.eval_manifest.string()}});
  return report;
}

train::PitchAblationResult run_pitch_ablation(const PipelineConfig& cfg, std::int64_t steps,
                                              const std::filesystem::path& curves) {
  cfg.validate();
  auto dataset = Dataset::open(cfg.data_dir());
  if (dataset.size() == 0) throw ArgumentError("the prepared dataset is empty");
  auto result = train::stop_gradient_pitch_experiment(dataset.training_corpus(), steps, cfg.wavegan);
  train::write_pitch_curves(curves, result);
  write_run_record(cfg, "pitch-ablation", {{"steps", steps}, {"curves", curves.string()}});
  return result;
}

}  // namespace wavelatent::pipeline
