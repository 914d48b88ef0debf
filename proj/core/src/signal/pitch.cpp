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

#include "wavelatent/signal/pitch.hpp"

#include <algorithm>
#include <cmath>

#include "wavelatent/errors.hpp"

namespace wavelatent::signal {

std::size_t PitchTrack::voiced_count() const {
  return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), std::uint8_t{1}));
}

torch::Tensor PitchTrack::log_f0_tensor() const {
  return torch::from_blob(const_cast<float*>(log_f0.data()),
                          {static_cast<std::int64_t>(log_f0.size())}, torch::kFloat32)
      .clone();
}

torch::Tensor PitchTrack::voicing_tensor() const {
  return torch::from_blob(const_cast<std::uint8_t*>(voiced.data()),
                          {static_cast<std::int64_t>(voiced.size())}, torch::kUInt8)
      .to(torch::kBool);
}

namespace {

// Normalized cross-correlation between the window at `start` and the same
// window shifted by each lag in [min_lag, max_lag].
void nccf(const std::vector<double>& x, std::size_t start, int window, int min_lag, int max_lag,
          std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(max_lag - min_lag + 1), 0.0);
  double e0 = 0.0;
  for (int n = 0; n < window; ++n) e0 += x[start + n] * x[start + n];
  // Running energy of the lagged window.
  double el = 0.0;
  for (int n = 0; n < window; ++n) el += x[start + min_lag + n] * x[start + min_lag + n];
  for (int lag = min_lag; lag <= max_lag; ++lag) {
    if (lag > min_lag) {
      const double drop = x[start + lag - 1];
      const double add = x[start + lag + window - 1];
      el += add * add - drop * drop;
    }
    double dot = 0.0;
    for (int n = 0; n < window; ++n) dot += x[start + n] * x[start + lag + n];
    const double denom = std::sqrt(std::max(e0 * el, 0.0));
    out[static_cast<std::size_t>(lag - min_lag)] = denom > 0.0 ? dot / denom : 0.0;
  }
}

// Median over the voiced frames of a 5-frame window; removes single-frame
// octave slips at phone boundaries and at voicing onsets.
void median_smooth(PitchTrack& track) {
  const auto n = track.log_f0.size();
  std::vector<float> out = track.log_f0;
  std::vector<float> win;
  for (std::size_t t = 0; t < n; ++t) {
    if (!track.voiced[t]) continue;
    win.clear();
    for (std::size_t j = t >= 2 ? t - 2 : 0; j < std::min(n, t + 3); ++j) {
      if (track.voiced[j]) win.push_back(track.log_f0[j]);
    }
    if (win.size() < 3) continue;
    std::nth_element(win.begin(), win.begin() + win.size() / 2, win.end());
    out[t] = win[win.size() / 2];
  }
  track.log_f0 = std::move(out);
}

void fill_unvoiced(PitchTrack& track) {
  const auto n = track.log_f0.size();
  std::vector<std::size_t> voiced_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (track.voiced[i]) voiced_idx.push_back(i);
  }
  if (voiced_idx.empty()) {
    std::fill(track.log_f0.begin(), track.log_f0.end(), 0.0f);
    return;
  }
  for (std::size_t i = 0; i < voiced_idx.front(); ++i) track.log_f0[i] = track.log_f0[voiced_idx.front()];
  for (std::size_t i = voiced_idx.back() + 1; i < n; ++i) track.log_f0[i] = track.log_f0[voiced_idx.back()];
  for (std::size_t k = 0; k + 1 < voiced_idx.size(); ++k) {
    const std::size_t a = voiced_idx[k], b = voiced_idx[k + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const float t = static_cast<float>(i - a) / static_cast<float>(b - a);
      track.log_f0[i] = (1.0f - t) * track.log_f0[a] + t * track.log_f0[b];
    }
  }
}

}  // namespace

PitchTrack extract_pitch(const Waveform& w, int hop_size, const PitchConfig& cfg) {
  if (hop_size <= 0) throw ArgumentError("pitch hop size must be positive");
  if (w.sample_rate <= 0) throw ArgumentError("pitch extraction needs a sample rate");
  if (!(cfg.fmin > 0.0 && cfg.fmin < cfg.fmax)) throw ArgumentError("invalid pitch search band");

  const auto length = static_cast<std::int64_t>(w.size());
  const auto frames = static_cast<std::size_t>((length + hop_size - 1) / hop_size);
  PitchTrack track;
  track.hop_size = hop_size;
  track.log_f0.assign(frames, 0.0f);
  track.voiced.assign(frames, 0);

  const double sr = w.sample_rate;
  const int min_lag = std::max(1, static_cast<int>(std::floor(sr / cfg.fmax)));
  const int max_lag = static_cast<int>(std::ceil(sr / cfg.fmin));
  const int window = std::max(static_cast<int>(std::lround(cfg.window_seconds * sr)), max_lag);
  const int span = window + max_lag + 1;
  if (length < span) return track;

  // Zero-padded copy so every analysis span is in range.
  const std::int64_t pad = span;
  std::vector<double> x(static_cast<std::size_t>(length + 2 * pad), 0.0);
  for (std::int64_t i = 0; i < length; ++i) x[static_cast<std::size_t>(i + pad)] = w.samples[i];

  const double log_lo = std::log(cfg.fmin), log_hi = std::log(cfg.fmax);
  std::vector<double> r;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::int64_t center = static_cast<std::int64_t>(t) * hop_size + hop_size / 2;
    const std::int64_t start = center - span / 2 + pad;

    double energy = 0.0;
    for (int n = 0; n < window; ++n) energy += x[start + n] * x[start + n];
    if (std::sqrt(energy / window) < cfg.silence_rms) continue;

    nccf(x, static_cast<std::size_t>(start), window, min_lag, max_lag, r);
    const double best = *std::max_element(r.begin(), r.end());
    if (best < cfg.voicing_threshold) continue;

    // Smallest-lag local peak close to the global maximum avoids octave drops.
    std::size_t pick = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
      if (r[k] >= 0.9 * best && r[k] >= r[k - 1] && r[k] >= r[k + 1]) {
        pick = k;
        break;
      }
    }
    double lag = static_cast<double>(pick) + min_lag;
    if (pick > 0 && pick + 1 < r.size()) {
      const double a = r[pick - 1], b = r[pick], c = r[pick + 1];
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) lag += 0.5 * (a - c) / denom;
    }
    const double log_f0 = std::clamp(std::log(sr / lag), log_lo, log_hi);
    track.log_f0[t] = static_cast<float>(log_f0);
    track.voiced[t] = 1;
  }
  median_smooth(track);
  fill_unvoiced(track);
  return track;
}

PitchTrack slice(const PitchTrack& track, std::size_t begin, std::size_t count) {
  if (begin + count > track.frames()) throw ArgumentError("pitch slice out of range");
  PitchTrack out;
  out.hop_size = track.hop_size;
  out.log_f0.assign(track.log_f0.begin() + begin, track.log_f0.begin() + begin + count);
  out.voiced.assign(track.voiced.begin() + begin, track.voiced.begin() + begin + count);
  return out;
}

}  // namespace wavelatent::signal
