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

#include "wavelatent/pipeline/config.hpp"

#include <fstream>
#include <sstream>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return (base / p).lexically_normal();
}

}  // namespace

void PipelineConfig::validate() const {
  if (sample_rate <= 0) throw ArgumentError("sample_rate must be positive");
  if (work_dir.empty()) throw ArgumentError("work_dir must be set");
  if (wavegan_steps < 0 || acoustic_steps < 0 || checkpoint_interval < 0) {
    throw ArgumentError("step counts must be non-negative");
  }
  if (!(temperature >= 0.0)) throw ArgumentError("temperature must be >= 0");
  wavegan.validate();
  acoustic.model.validate();
  if (acoustic.batch_size <= 0) throw ArgumentError("acoustic.batch_size must be positive");
  if (!wavegan.inner_gan && acoustic.model.latent_dim != wavegan.model.encoder.latent_dim) {
    throw ArgumentError("acoustic latent_dim must equal the waveform encoder latent_dim");
  }
  eval_mel.spectral.validate();
  if (mcd_order < 1 || mcd_order >= eval_mel.n_mels) {
    throw ArgumentError("mcd_order must lie in [1, n_mels)");
  }
}

void PipelineConfig::propagate() {
  wavegan.seed = seed;
  wavegan.sample_rate = sample_rate;
  acoustic.seed = seed;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config: " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw VersionError("config " + path.string() + " has no schema tag");
  }
  if (j["schema"].get<std::string>() != kConfigSchema) {
    throw VersionError("config schema '" + j["schema"].get<std::string>() + "' is not supported (" +
                       kConfigSchema + ")");
  }
  PipelineConfig cfg;
  try {
    cfg = j.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config " + path.string() + ": " + e.what());
  }
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  cfg.manifest = resolve(base, cfg.manifest);
  cfg.eval_manifest = resolve(base, cfg.eval_manifest);
  cfg.work_dir = resolve(base, cfg.work_dir);
  cfg.vocabulary = resolve(base, cfg.vocabulary);
  cfg.propagate();
  return cfg;
}

void save_config(const std::filesystem::path& path, const PipelineConfig& cfg) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write config: " + path.string());
  out << nlohmann::json(cfg).dump(2) << '\n';
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = nlohmann::json{{"schema", kConfigSchema},
                     {"sample_rate", c.sample_rate},
                     {"manifest", c.manifest.string()},
                     {"eval_manifest", c.eval_manifest.string()},
                     {"work_dir", c.work_dir.string()},
                     {"vocabulary", c.vocabulary.string()},
                     {"seed", c.seed},
                     {"pitch", c.pitch},
                     {"wavegan", c.wavegan},
                     {"acoustic", c.acoustic},
                     {"wavegan_steps", c.wavegan_steps},
                     {"acoustic_steps", c.acoustic_steps},
                     {"checkpoint_interval", c.checkpoint_interval},
                     {"temperature", c.temperature},
                     {"eval_mel", c.eval_mel},
                     {"mcd_order", c.mcd_order}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  c = PipelineConfig{};
  c.sample_rate = j.value("sample_rate", c.sample_rate);
  c.manifest = j.value("manifest", std::string());
  c.eval_manifest = j.value("eval_manifest", std::string());
  c.work_dir = j.value("work_dir", c.work_dir.string());
  c.vocabulary = j.value("vocabulary", std::string());
  c.seed = j.value("seed", c.seed);
  if (j.contains("pitch")) c.pitch = j.at("pitch").get<signal::PitchConfig>();
  if (j.contains("wavegan")) c.wavegan = j.at("wavegan").get<train::WaveGanTrainerConfig>();
  if (j.contains("acoustic")) c.acoustic = j.at("acoustic").get<train::AcousticTrainerConfig>();
  c.wavegan_steps = j.value("wavegan_steps", c.wavegan_steps);
  c.acoustic_steps = j.value("acoustic_steps", c.acoustic_steps);
  c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
  c.temperature = j.value("temperature", c.temperature);
  if (j.contains("eval_mel")) c.eval_mel = j.at("eval_mel").get<signal::MelConfig>();
  c.mcd_order = j.value("mcd_order", c.mcd_order);
}

}  // namespace wavelatent::pipeline
