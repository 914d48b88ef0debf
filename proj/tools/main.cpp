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

// Command-line front end for the two-stage pipeline.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <torch/torch.h>

#include "wavelatent/errors.hpp"
#include "wavelatent/pipeline/commands.hpp"
#include "wavelatent/version.hpp"

namespace wl = wavelatent;
namespace pl = wavelatent::pipeline;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kVersion = 5,
  kAlignment = 6,
};

// Options shared by every subcommand.
struct Common {
  std::string config;
  std::string work_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> sample_rate;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Pipeline config (JSON)")->required();
  cmd->add_option("--work-dir", c.work_dir, "Override the output directory");
  cmd->add_option("--seed", c.seed, "Override the random seed");
  cmd->add_option("--sample-rate", c.sample_rate, "Override the sample rate");
  cmd->add_option("--threads", c.threads, "Intra-op threads (1 gives bitwise reproducibility)")
      ->check(CLI::PositiveNumber);
}

pl::PipelineConfig resolve(const Common& c) {
  auto cfg = pl::load_config(c.config);
  if (!c.work_dir.empty()) cfg.work_dir = c.work_dir;
  if (c.seed) cfg.seed = *c.seed;
  if (c.sample_rate) cfg.sample_rate = *c.sample_rate;
  cfg.propagate();
  torch::set_num_threads(c.threads);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelatent: latent-representation text-to-speech"};
  app.set_version_flag("--version", std::string(wl::kVersion));
  app.require_subcommand(1);

  Common common;
  std::string manifest;
  std::optional<std::int64_t> steps;
  bool resume = false;
  std::string text, input, output, report, eval_manifest;
  std::optional<double> temperature;

  auto* prepare = app.add_subcommand("prepare-data", "Resample, track pitch and tokenize a manifest");
  add_common(prepare, common);
  prepare->add_option("--manifest", manifest, "Override the training manifest");

  auto* train_wavegan = app.add_subcommand("train-wavegan", "Train the waveform model");
  add_common(train_wavegan, common);
  train_wavegan->add_option("--steps", steps, "Steps to run");
  train_wavegan->add_flag("--resume", resume, "Continue from the existing checkpoint");

  auto* extract = app.add_subcommand("extract-stats", "Cache posterior statistics per utterance");
  add_common(extract, common);

  auto* train_acoustic = app.add_subcommand("train-acoustic", "Train the flow acoustic model");
  add_common(train_acoustic, common);
  train_acoustic->add_option("--steps", steps, "Steps to run");
  train_acoustic->add_flag("--resume", resume, "Continue from the existing checkpoint");

  auto* synth = app.add_subcommand("synthesize", "Text to waveform");
  add_common(synth, common);
  synth->add_option("--text", text, "Input text")->required();
  synth->add_option("--output", output, "Output WAV path")->required();
  synth->add_option("--temperature", temperature, "Prior sampling temperature");

  auto* recon = app.add_subcommand("reconstruct", "Encode and decode one waveform");
  add_common(recon, common);
  recon->add_option("--input", input, "Input audio")->required()->check(CLI::ExistingFile);
  recon->add_option("--output", output, "Output WAV path")->required();

  auto* eval = app.add_subcommand("eval-recon", "Objective copy-synthesis metrics");
  add_common(eval, common);
  eval->add_option("--report", report, "Report path (JSON)")->required();
  eval->add_option("--eval-manifest", eval_manifest, "Override the held-out manifest");

  auto* ablation = app.add_subcommand("pitch-ablation",
                                      "Pitch loss with and without a detached predictor input");
  add_common(ablation, common);
  ablation->add_option("--steps", steps, "Steps per variant")->required();
  ablation->add_option("--output", output, "Curve records (JSON lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto cfg = resolve(common);
    if (prepare->parsed()) {
      if (!manifest.empty()) cfg.manifest = manifest;
      auto s = pl::run_prepare_data(cfg);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "processed " << s.processed << " of " << s.rows << " rows (" << s.skipped
                << " skipped), " << s.total_seconds << " s of audio\n";
    } else if (train_wavegan->parsed()) {
      if (steps) cfg.wavegan_steps = *steps;
      pl::run_train_wavegan(cfg, resume, std::cout);
    } else if (extract->parsed()) {
      std::cout << "cached " << pl::run_extract_stats(cfg) << " utterances\n";
    } else if (train_acoustic->parsed()) {
      if (steps) cfg.acoustic_steps = *steps;
      pl::run_train_acoustic(cfg, resume, std::cout);
    } else if (synth->parsed()) {
      auto out = pl::run_synthesize(cfg, text, output, temperature.value_or(cfg.temperature));
      std::cout << "wrote " << out.audio.size() << " samples to " << output << '\n';
    } else if (recon->parsed()) {
      pl::run_reconstruct(cfg, input, output);
    } else if (eval->parsed()) {
      if (!eval_manifest.empty()) cfg.eval_manifest = eval_manifest;
      auto r = pl::run_eval_recon(cfg, report);
      std::cout << "mel-L1 " << r.mean_mel_l1 << "  MCD " << r.mean_mcd << " dB  pitch RMSE "
                << r.mean_pitch_rmse << '\n';
    } else if (ablation->parsed()) {
      auto r = pl::run_pitch_ablation(cfg, *steps, output);
      if (!r.with_gradient.empty() && !r.stop_gradient.empty()) {
        std::cout << "final pitch loss: with gradient " << r.with_gradient.back()
                  << ", stop gradient " << r.stop_gradient.back() << '\n';
      }
    }
  } catch (const wl::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const wl::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const wl::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const wl::VersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVersion;
  } catch (const wl::AlignmentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAlignment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
