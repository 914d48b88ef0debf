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

#include "toy_corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "wavelatent/pipeline/tokenizer.hpp"
#include "wavelatent/signal/wav_io.hpp"

namespace wavelatent::testing {
namespace {

enum class Kind { kVowel, kVoiced, kFricative, kStop, kSilence };

struct Phone {
  Kind kind;
  double seconds;
  std::array<double, 3> formants;  // Hz; noise centre for fricatives and stops
  double gain;
  double pitch_offset;  // semitones
};

Phone describe(const std::string& p) {
  static const std::map<std::string, Phone> table = {
      {"aa", {Kind::kVowel, 0.13, {730, 1090, 2440}, 1.0, 0.0}},
      {"ae", {Kind::kVowel, 0.12, {660, 1720, 2410}, 1.0, 0.5}},
      {"ah", {Kind::kVowel, 0.10, {520, 1190, 2390}, 0.9, -0.5}},
      {"aw", {Kind::kVowel, 0.15, {600, 1000, 2400}, 1.0, 1.0}},
      {"ay", {Kind::kVowel, 0.15, {660, 1500, 2500}, 1.0, 1.5}},
      {"eh", {Kind::kVowel, 0.10, {530, 1840, 2480}, 0.9, 0.0}},
      {"er", {Kind::kVowel, 0.12, {490, 1350, 1690}, 0.9, -1.0}},
      {"ey", {Kind::kVowel, 0.14, {450, 2000, 2600}, 1.0, 1.0}},
      {"ih", {Kind::kVowel, 0.09, {390, 1990, 2550}, 0.8, 0.5}},
      {"iy", {Kind::kVowel, 0.13, {270, 2290, 3010}, 0.9, 2.0}},
      {"ow", {Kind::kVowel, 0.14, {450, 800, 2600}, 1.0, -1.0}},
      {"oy", {Kind::kVowel, 0.16, {500, 900, 2500}, 1.0, 0.0}},
      {"uh", {Kind::kVowel, 0.10, {440, 1020, 2240}, 0.8, -1.0}},
      {"uw", {Kind::kVowel, 0.13, {300, 870, 2240}, 0.9, -2.0}},
      {"b", {Kind::kStop, 0.06, {600, 0, 0}, 0.4, 0.0}},
      {"d", {Kind::kStop, 0.06, {2500, 0, 0}, 0.4, 0.0}},
      {"g", {Kind::kStop, 0.07, {1800, 0, 0}, 0.4, 0.0}},
      {"p", {Kind::kStop, 0.08, {800, 0, 0}, 0.5, 0.0}},
      {"t", {Kind::kStop, 0.08, {4000, 0, 0}, 0.5, 0.0}},
      {"k", {Kind::kStop, 0.08, {2200, 0, 0}, 0.5, 0.0}},
      {"ch", {Kind::kFricative, 0.10, {3200, 0, 0}, 0.45, 0.0}},
      {"jh", {Kind::kVoiced, 0.09, {300, 2000, 2800}, 0.5, 0.0}},
      {"f", {Kind::kFricative, 0.09, {5000, 0, 0}, 0.25, 0.0}},
      {"th", {Kind::kFricative, 0.09, {6000, 0, 0}, 0.2, 0.0}},
      {"dh", {Kind::kVoiced, 0.06, {300, 1500, 2500}, 0.5, 0.0}},
      {"s", {Kind::kFricative, 0.10, {6500, 0, 0}, 0.4, 0.0}},
      {"sh", {Kind::kFricative, 0.10, {3000, 0, 0}, 0.45, 0.0}},
      {"z", {Kind::kVoiced, 0.09, {300, 1700, 2600}, 0.45, 0.0}},
      {"zh", {Kind::kVoiced, 0.09, {300, 1900, 2600}, 0.45, 0.0}},
      {"v", {Kind::kVoiced, 0.07, {300, 1100, 2300}, 0.45, 0.0}},
      {"hh", {Kind::kFricative, 0.06, {1500, 0, 0}, 0.2, 0.0}},
      {"m", {Kind::kVoiced, 0.08, {280, 1000, 2200}, 0.55, 0.0}},
      {"n", {Kind::kVoiced, 0.08, {280, 1700, 2600}, 0.55, 0.0}},
      {"ng", {Kind::kVoiced, 0.09, {280, 2000, 2700}, 0.5, 0.0}},
      {"l", {Kind::kVoiced, 0.08, {360, 1300, 2700}, 0.6, 0.0}},
      {"r", {Kind::kVoiced, 0.08, {420, 1300, 1600}, 0.6, 0.0}},
      {"w", {Kind::kVoiced, 0.07, {300, 700, 2200}, 0.6, 0.0}},
      {"y", {Kind::kVoiced, 0.07, {280, 2200, 2900}, 0.6, 0.0}},
      {"_", {Kind::kSilence, 0.05, {0, 0, 0}, 0.0, 0.0}},
      {",", {Kind::kSilence, 0.12, {0, 0, 0}, 0.0, 0.0}},
      {".", {Kind::kSilence, 0.18, {0, 0, 0}, 0.0, 0.0}},
      {"?", {Kind::kSilence, 0.18, {0, 0, 0}, 0.0, 0.0}},
      {"!", {Kind::kSilence, 0.18, {0, 0, 0}, 0.0, 0.0}},
  };
  auto it = table.find(p);
  return it != table.end() ? it->second : Phone{Kind::kSilence, 0.05, {0, 0, 0}, 0.0, 0.0};
}

constexpr std::array<const char*, 40> kWords = {
    "a",     "bright", "cat",   "sees",   "the",   "moon",  "over",  "red",  "hills",  "and",
    "we",    "may",    "sing",  "songs",  "of",    "sun",   "water", "flows", "down",  "to",
    "sea",   "quiet",  "birds", "fly",    "high",  "above", "green", "fields", "each", "day",
    "slow",  "rain",   "falls", "on",     "roofs", "where", "old",   "trees", "grow",  "tall"};

// Second-order resonator response magnitude at `f`.
double resonance(double f, double centre, double bandwidth) {
  const double x = (f - centre) / bandwidth;
  return 1.0 / std::sqrt(1.0 + x * x);
}

}  // namespace

signal::Waveform render_phonemes(const std::vector<std::string>& phonemes, int sample_rate,
                                 std::uint64_t seed, double noise_floor) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sr = sample_rate;
  const double nyquist = 0.5 * sr;

  std::vector<Phone> phones;
  std::vector<std::size_t> starts{0};
  for (const auto& p : phonemes) {
    phones.push_back(describe(p));
    starts.push_back(starts.back() + static_cast<std::size_t>(phones.back().seconds * sr));
  }
  const std::size_t total = starts.back() + static_cast<std::size_t>(0.05 * sr);
  std::vector<double> out(total, 0.0);

  double phase = 0.0;
  std::array<double, 3> formants{500, 1500, 2500};
  // One-pole smoothing of formant tracks gives coarticulation-like glides.
  const double glide = 1.0 - std::exp(-1.0 / (0.015 * sr));
  double noise_lp = 0.0, noise_hp_prev = 0.0;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const auto& ph = phones[i];
    const std::size_t begin = starts[i], end = starts[i + 1];
    const double span = static_cast<double>(end - begin);
    for (std::size_t n = begin; n < end; ++n) {
      const double t = static_cast<double>(n) / sr;
      const double local = static_cast<double>(n - begin) / span;
      const double ramp = std::min({1.0, local * span / (0.01 * sr), (1.0 - local) * span / (0.01 * sr)});
      const double f0 = 120.0 * std::pow(2.0, ph.pitch_offset / 12.0) *
                        (1.0 + 0.08 * std::sin(2.0 * std::numbers::pi * t / 1.1)) * (1.0 - 0.1 * t / 3.0);
      double sample = 0.0;
      if (ph.kind == Kind::kVowel || ph.kind == Kind::kVoiced) {
        for (int k = 0; k < 3; ++k) formants[k] += glide * (ph.formants[k] - formants[k]);
        phase += 2.0 * std::numbers::pi * f0 / sr;
        if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
        for (int h = 1; h * f0 < std::min(5000.0, nyquist); ++h) {
          const double f = h * f0;
          const double amp = resonance(f, formants[0], 90.0) + 0.6 * resonance(f, formants[1], 120.0) +
                             0.3 * resonance(f, formants[2], 160.0);
          sample += amp * std::sin(h * phase) / std::sqrt(static_cast<double>(h));
        }
        sample *= 0.12 * ph.gain;
      } else if (ph.kind == Kind::kFricative || ph.kind == Kind::kStop) {
        const bool burst = ph.kind == Kind::kStop;
        const double env = burst ? (local > 0.55 ? std::exp(-(local - 0.55) * 12.0) : 0.0) : 1.0;
        // Band-limited noise: low-pass at the centre, high-pass at half of it.
        const double centre = std::min(ph.formants[0], 0.9 * nyquist);
        const double a = 1.0 - std::exp(-2.0 * std::numbers::pi * centre / sr);
        const double white = gauss(rng);
        noise_lp += a * (white - noise_lp);
        const double hp = noise_lp - noise_hp_prev * 0.6;
        noise_hp_prev = noise_lp;
        sample = 0.5 * ph.gain * env * hp;
      }
      out[n] += ramp * sample;
    }
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  signal::Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(total);
  for (std::size_t n = 0; n < total; ++n) {
    const double v = (peak > 0.0 ? 0.9 * out[n] / peak : 0.0) + noise_floor * gauss(rng);
    w.samples[n] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return w;
}

std::vector<ToyClip> make_toy_corpus(const ToyCorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> word(0, kWords.size() - 1);
  std::uniform_int_distribution<int> count(options.min_words, options.max_words);
  pipeline::RuleBasedTokenizer tokenizer;
  std::vector<ToyClip> clips;
  for (int c = 0; c < options.clips; ++c) {
    const int n = count(rng);
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.emplace_back(kWords[word(rng)]);
    ToyClip clip;
    clip.id = "toy_" + std::to_string(1000 + c).substr(1);
    const std::uint64_t render_seed = rng();
    // Drop trailing words until the clip fits.
    while (true) {
      std::string text;
      for (std::size_t i = 0; i < words.size(); ++i) text += (i ? " " : "") + words[i];
      text += ".";
      clip.text = text;
      clip.audio = render_phonemes(tokenizer.phonemes(text), options.sample_rate, render_seed,
                                   options.noise_floor);
      if (clip.audio.duration_seconds() <= options.max_seconds || words.size() == 1) break;
      words.pop_back();
    }
    clips.push_back(std::move(clip));
  }
  return clips;
}

std::filesystem::path write_toy_dataset(const std::filesystem::path& dir,
                                        const std::vector<ToyClip>& clips) {
  std::filesystem::create_directories(dir / "wav");
  const auto manifest = dir / "manifest.txt";
  std::ofstream out(manifest, std::ios::trunc);
  for (const auto& clip : clips) {
    signal::save_waveform(dir / "wav" / (clip.id + ".wav"), clip.audio, signal::WavEncoding::kPcm16);
    out << "wav/" << clip.id << ".wav|" << clip.text << '\n';
  }
  return manifest;
}

}  // namespace wavelatent::testing
