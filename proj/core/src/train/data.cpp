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

#include "wavelatent/train/data.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wavelatent/errors.hpp"

namespace wavelatent::train {

EpochSampler::EpochSampler(std::size_t items, std::size_t batch_size, std::uint64_t seed)
    : items_(items), batch_size_(batch_size), rng_(seed) {
  if (items_ == 0) throw ArgumentError("cannot sample from an empty corpus");
  if (batch_size_ == 0) throw ArgumentError("batch size must be positive");
  reshuffle();
}

void EpochSampler::reshuffle() {
  order_.resize(items_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::shuffle(order_.begin(), order_.end(), rng_);
  cursor_ = 0;
}

std::vector<std::size_t> EpochSampler::next() {
  std::vector<std::size_t> batch;
  batch.reserve(batch_size_);
  while (batch.size() < batch_size_) {
    if (cursor_ == order_.size()) {
      ++epoch_;
      reshuffle();
    }
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

std::size_t EpochSampler::steps_per_epoch() const {
  return (items_ + batch_size_ - 1) / batch_size_;
}

std::string EpochSampler::state() const {
  std::ostringstream out;
  out << rng_ << ' ' << cursor_ << ' ' << epoch_ << ' ' << order_.size();
  for (auto i : order_) out << ' ' << i;
  return out.str();
}

void EpochSampler::restore(const std::string& state) {
  std::istringstream in(state);
  std::size_t n = 0;
  in >> rng_ >> cursor_ >> epoch_ >> n;
  order_.resize(n);
  for (auto& i : order_) in >> i;
  if (!in || n != items_ || cursor_ > n) throw FormatError("corrupt sampler state");
}

torch::Tensor conditioning_mel(const torch::Tensor& audio, const torch::Tensor& filterbank,
                               const signal::MelConfig& mel) {
  const auto frames = audio.size(-1) / mel.spectral.hop_size;
  auto log_mel = signal::log_mel_spectrogram(audio, filterbank, mel.spectral);
  return log_mel.narrow(-2, 0, frames).transpose(-1, -2).contiguous();
}

SegmentSampler::SegmentSampler(const std::vector<TrainingUtterance>& corpus, int segment_samples,
                               int hop_size, std::size_t batch_size, std::uint64_t seed)
    : corpus_(&corpus),
      segment_(segment_samples),
      hop_(hop_size),
      order_(corpus.size(), batch_size, seed),
      crop_rng_(seed ^ 0x9E3779B97F4A7C15ULL) {
  if (hop_ <= 0 || segment_ <= 0 || segment_ % hop_ != 0) {
    throw ArgumentError("segment length must be a positive multiple of the hop size");
  }
}

void SegmentSampler::enable_mel(int sample_rate, const signal::MelConfig& mel) {
  if (mel.spectral.hop_size != hop_) {
    throw ArgumentError("conditioning mel hop must equal the decoder hop");
  }
  with_mel_ = true;
  mel_ = mel;
  filterbank_ = signal::mel_filterbank(sample_rate, mel.spectral.fft_size, mel.n_mels, mel.fmin, mel.fmax);
}

TrainingBatch SegmentSampler::next() {
  const auto picks = order_.next();
  const auto batch = static_cast<std::int64_t>(picks.size());
  const std::int64_t seg_frames = segment_ / hop_;
  TrainingBatch out;
  out.audio = torch::zeros({batch, segment_}, torch::kFloat32);
  out.log_f0 = torch::zeros({batch, seg_frames}, torch::kFloat32);
  out.voiced = torch::zeros({batch, seg_frames}, torch::kBool);
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& utt = (*corpus_)[picks[static_cast<std::size_t>(b)]];
    const std::int64_t length = utt.audio.size(0);
    const std::int64_t frames = (length + hop_ - 1) / hop_;
    std::int64_t start = 0;
    if (frames > seg_frames) {
      std::uniform_int_distribution<std::int64_t> dist(0, frames - seg_frames);
      start = dist(crop_rng_);
    }
    const std::int64_t first = start * hop_;
    const std::int64_t take = std::min<std::int64_t>(segment_, length - first);
    out.audio[b].narrow(0, 0, take).copy_(utt.audio.narrow(0, first, take));
    const std::int64_t pitch_frames =
        std::min<std::int64_t>(seg_frames, static_cast<std::int64_t>(utt.pitch.frames()) - start);
    if (pitch_frames > 0) {
      auto f0 = utt.pitch.log_f0_tensor().narrow(0, start, pitch_frames);
      auto voiced = utt.pitch.voicing_tensor().narrow(0, start, pitch_frames);
      out.log_f0[b].narrow(0, 0, pitch_frames).copy_(f0);
      out.voiced[b].narrow(0, 0, pitch_frames).copy_(voiced);
    }
  }
  if (with_mel_) out.mel = conditioning_mel(out.audio, filterbank_, mel_);
  return out;
}

std::string SegmentSampler::state() const {
  std::ostringstream out;
  out << order_.state() << '\n' << crop_rng_;
  return out.str();
}

void SegmentSampler::restore(const std::string& state) {
  const auto split = state.find('\n');
  if (split == std::string::npos) throw FormatError("corrupt segment sampler state");
  order_.restore(state.substr(0, split));
  std::istringstream in(state.substr(split + 1));
  in >> crop_rng_;
  if (!in) throw FormatError("corrupt segment sampler state");
}

}  // namespace wavelatent::train
