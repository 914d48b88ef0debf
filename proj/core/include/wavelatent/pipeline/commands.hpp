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
#include <iosfwd>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "wavelatent/pipeline/config.hpp"
#include "wavelatent/pipeline/dataset.hpp"
#include "wavelatent/pipeline/evaluation.hpp"
#include "wavelatent/pipeline/synthesis.hpp"
#include "wavelatent/pipeline/tokenizer.hpp"
#include "wavelatent/train/wavegan_trainer.hpp"

namespace wavelatent::pipeline {

/// Vocabulary named by the config, or the bundled phone set. Throws
/// ArgumentError if it does not fit the text encoder's embedding table.
Vocabulary load_vocabulary(const PipelineConfig& cfg);

/// Writes runs/<command>.json holding the config, seed, code version and
/// command inputs. No timestamps, so identical runs leave identical records.
void write_run_record(const PipelineConfig& cfg, const std::string& command,
                      const nlohmann::json& inputs);

DatasetSummary run_prepare_data(const PipelineConfig& cfg);

/// Trains the waveform model for cfg.wavegan_steps further steps. With
/// `resume`, continues from the existing checkpoint and sampler state.
void run_train_wavegan(const PipelineConfig& cfg, bool resume, std::ostream& log);

std::size_t run_extract_stats(const PipelineConfig& cfg);

void run_train_acoustic(const PipelineConfig& cfg, bool resume, std::ostream& log);

SynthesisOutput run_synthesize(const PipelineConfig& cfg, const std::string& text,
                               const std::filesystem::path& output, double temperature);

void run_reconstruct(const PipelineConfig& cfg, const std::filesystem::path& input,
                     const std::filesystem::path& output);

ReconReport run_eval_recon(const PipelineConfig& cfg, const std::filesystem::path& report);

train::PitchAblationResult run_pitch_ablation(const PipelineConfig& cfg, std::int64_t steps,
                                              const std::filesystem::path& curves);

}  // namespace wavelatent::pipeline
