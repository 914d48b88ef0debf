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

#include "wavelatent/signal/resample.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "wavelatent/errors.hpp"

namespace wavelatent::signal {
namespace {

constexpr int kZeroCrossings = 32;
constexpr double kKaiserBeta = 8.6;
constexpr double kRolloff = 0.95;
constexpr std::int64_t kMaxTabulatedPhases = 4096;

class SincKernel {
 public:
  SincKernel(std::int64_t up, std::int64_t down)
      : up_(up), cutoff_(std::min(1.0, static_cast<double>(up) / down) * kRolloff) {
    half_width_ = static_cast<int>(std::ceil(kZeroCrossings / cutoff_));
    norm_ = std::cyl_bessel_i(0.0, kKaiserBeta);
    if (up_ <= kMaxTabulatedPhases) {
      table_.resize(static_cast<std::size_t>(up_) * taps());
      for (std::int64_t p = 0; p < up_; ++p) fill(p, &table_[static_cast<std::size_t>(p) * taps()]);
    }
  }

  int taps() const { return 2 * half_width_; }
  int half_width() const { return half_width_; }

  // Weights for input samples n0 - half_width + 1 .. n0 + half_width at
  // fractional phase `phase / up`.
  const double* weights(std::int64_t phase, std::vector<double>& scratch) const {
    if (!table_.empty()) return &table_[static_cast<std::size_t>(phase) * taps()];
    scratch.resize(taps());
    fill(phase, scratch.data());
    return scratch.data();
  }

 private:
  void fill(std::int64_t phase, double* out) const {
    const double frac = static_cast<double>(phase) / up_;
    double sum = 0.0;
    for (int i = 0; i < taps(); ++i) {
      const double d = frac + (half_width_ - 1 - i);  // t - n
      const double x = cutoff_ * d;
      const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double r = d / half_width_;
      const double win = std::abs(r) >= 1.0
                             ? 0.0
                             : std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) / norm_;
      out[i] = cutoff_ * sinc * win;
      sum += out[i];
    }
    for (int i = 0; i < taps(); ++i) out[i] /= sum;
  }

  std::int64_t up_;
  double cutoff_;
  int half_width_ = 0;
  double norm_ = 1.0;
  std::vector<double> table_;
};

}  // namespace

Waveform resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0) throw ArgumentError("target sample rate must be positive");
  if (w.sample_rate <= 0) throw ArgumentError("input sample rate must be positive");
  if (target_rate == w.sample_rate) return w;

  const std::int64_t g = std::gcd<std::int64_t>(w.sample_rate, target_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = w.sample_rate / g;
  const auto n_in = static_cast<std::int64_t>(w.samples.size());
  const std::int64_t n_out = (n_in * up + down - 1) / down;

  SincKernel kernel(up, down);
  std::vector<double> scratch;
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(n_out));
  for (std::int64_t k = 0; k < n_out; ++k) {
    const std::int64_t pos = k * down;
    const std::int64_t n0 = pos / up;
    const double* h = kernel.weights(pos % up, scratch);
    const std::int64_t first = n0 - kernel.half_width() + 1;
    double acc = 0.0;
    for (int i = 0; i < kernel.taps(); ++i) {
      const std::int64_t n = first + i;
      if (n >= 0 && n < n_in) acc += h[i] * w.samples[static_cast<std::size_t>(n)];
    }
    out.samples[static_cast<std::size_t>(k)] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace wavelatent::signal
