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

#include "wavelatent/pipeline/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wavelatent/errors.hpp"
#include "wavelatent/pipeline/manifest.hpp"
#include "wavelatent/signal/resample.hpp"
#include "wavelatent/signal/wav_io.hpp"

namespace wavelatent::pipeline {
namespace {

constexpr const char* kIndexFile = "dataset.jsonl";

nlohmann::json record_to_json(const UtteranceRecord& r) {
  return {{"id", r.id},         {"transcript", r.transcript}, {"phonemes", r.phonemes},
          {"tokens", r.tokens}, {"samples", r.samples},       {"sample_rate", r.sample_rate}};
}

UtteranceRecord record_from_json(const nlohmann::json& j) {
  UtteranceRecord r;
  r.id = j.at("id").get<std::string>();
  r.transcript = j.value("transcript", std::string());
  r.phonemes = j.value("phonemes", std::vector<std::string>{});
  r.tokens = j.at("tokens").get<std::vector<std::int64_t>>();
  r.samples = j.at("samples").get<std::int64_t>();
  r.sample_rate = j.at("sample_rate").get<int>();
  return r;
}

}  // namespace

signal::Waveform ingest_audio(const std::filesystem::path& path, int sample_rate) {
  auto w = signal::load_waveform(path);
  if (w.empty()) throw FormatError(path.string() + " holds no samples");
  for (float s : w.samples) {
    if (!std::isfinite(s)) throw FormatError(path.string() + " holds non-finite samples");
  }
  w = signal::peak_normalize(signal::resample(w, sample_rate), 0.95f);
  // Resampling ringing can exceed the original peak, so normalize last.
  signal::validate(w);
  return w;
}

void save_pitch(const std::filesystem::path& path, const signal::PitchTrack& track) {
  std::vector<int> voiced(track.voiced.begin(), track.voiced.end());
  nlohmann::json j{{"hop_size", track.hop_size}, {"log_f0", track.log_f0}, {"voiced", voiced}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write pitch track: " + path.string());
  out << j.dump() << '\n';
}

signal::PitchTrack load_pitch(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read pitch track: " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    signal::PitchTrack track;
    track.hop_size = j.at("hop_size").get<int>();
    track.log_f0 = j.at("log_f0").get<std::vector<float>>();
    for (int v : j.at("voiced").get<std::vector<int>>()) track.voiced.push_back(v ? 1 : 0);
    if (track.voiced.size() != track.log_f0.size()) throw FormatError("length mismatch");
    return track;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed pitch track " + path.string() + ": " + e.what());
  }
}

Dataset Dataset::open(const std::filesystem::path& root) {
  std::ifstream in(root / kIndexFile);
  if (!in) throw IoError("no prepared dataset at " + root.string());
  Dataset ds;
  ds.root_ = root;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    try {
      ds.utterances_.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("malformed dataset index " + (root / kIndexFile).string() + ": " + e.what());
    }
  }
  return ds;
}

std::filesystem::path Dataset::audio_path(const UtteranceRecord& r) const {
  return root_ / "audio" / (r.id + ".wav");
}

std::filesystem::path Dataset::pitch_path(const UtteranceRecord& r) const {
  return root_ / "pitch" / (r.id + ".json");
}

signal::Waveform Dataset::load_audio(const UtteranceRecord& r) const {
  return signal::load_waveform(audio_path(r));
}

signal::PitchTrack Dataset::load_pitch(const UtteranceRecord& r) const {
  return pipeline::load_pitch(pitch_path(r));
}

std::vector<train::TrainingUtterance> Dataset::training_corpus() const {
  std::vector<train::TrainingUtterance> corpus;
  corpus.reserve(utterances_.size());
  for (const auto& r : utterances_) {
    train::TrainingUtterance u;
    u.id = r.id;
    u.audio = signal::to_tensor(load_audio(r));
    u.pitch = load_pitch(r);
    u.tokens = r.tokens;
    corpus.push_back(std::move(u));
  }
  return corpus;
}

DatasetSummary prepare_data(const PipelineConfig& cfg, const Tokenizer& tokenizer,
                            const Vocabulary& vocab) {
  if (cfg.manifest.empty()) throw ArgumentError("config does not name a manifest");
  auto manifest = read_manifest(cfg.manifest);
  const int hop = cfg.wavegan.model.hop_size();

  const auto root = cfg.data_dir();
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root / "audio");
  std::filesystem::create_directories(root / "pitch");

  DatasetSummary summary;
  summary.rows = manifest.rows.size() + manifest.warnings.size();
  summary.skipped = manifest.warnings.size();
  summary.warnings = manifest.warnings;

  std::sort(manifest.rows.begin(), manifest.rows.end(),
            [](const ManifestRow& a, const ManifestRow& b) { return a.id < b.id; });

  std::ofstream index(root / kIndexFile, std::ios::trunc);
  if (!index) throw IoError("cannot write dataset index under " + root.string());
  for (const auto& row : manifest.rows) {
    try {
      UtteranceRecord r;
      r.id = row.id;
      r.transcript = row.transcript;
      r.phonemes = tokenizer.phonemes(row.transcript);
      r.tokens = tokenize(tokenizer, vocab, row.transcript);
      auto w = ingest_audio(row.audio, cfg.sample_rate);
      if (static_cast<int>(w.size()) < hop) {
        throw FormatError("audio is shorter than one latent frame");
      }
      r.samples = static_cast<std::int64_t>(w.size());
      r.sample_rate = w.sample_rate;
      signal::save_waveform(root / "audio" / (r.id + ".wav"), w, signal::WavEncoding::kFloat32);
      save_pitch(root / "pitch" / (r.id + ".json"), signal::extract_pitch(w, hop, cfg.pitch));
      index << record_to_json(r).dump() << '\n';
      ++summary.processed;
      summary.total_seconds += w.duration_seconds();
    } catch (const Error& e) {
      ++summary.skipped;
      summary.warnings.push_back("line " + std::to_string(row.line) + " (" + row.id + "): " + e.what());
    }
  }

  nlohmann::json js{{"rows", summary.rows},
                    {"processed", summary.processed},
                    {"skipped", summary.skipped},
                    {"total_seconds", summary.total_seconds},
                    {"warnings", summary.warnings}};
  std::ofstream out(root / "summary.json", std::ios::trunc);
  out << js.dump(2) << '\n';
  return summary;
}

}  // namespace wavelatent::pipeline
