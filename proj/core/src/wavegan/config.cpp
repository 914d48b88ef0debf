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

#include "wavelatent/wavegan/config.hpp"

#include <functional>
#include <numeric>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::wavegan {
namespace {

int product(const std::vector<int>& v) {
  return std::accumulate(v.begin(), v.end(), 1, std::multiplies<>());
}

void check_stages(const std::vector<int>& factors, const std::vector<int>& channels,
                  const char* what) {
  if (factors.size() != channels.size()) {
    throw ArgumentError(std::string(what) + ": factor and channel lists differ in length");
  }
  for (int f : factors) {
    if (f < 2 || f % 2 != 0) throw ArgumentError(std::string(what) + ": factors must be even");
  }
  for (int c : channels) {
    if (c <= 0) throw ArgumentError(std::string(what) + ": channels must be positive");
  }
}

}  // namespace

int EncoderConfig::total_factor() const { return product(down_factors); }
int DecoderConfig::total_factor() const { return product(up_factors); }

void WaveGanConfig::validate() const {
  check_stages(encoder.down_factors, encoder.down_channels, "encoder");
  check_stages(decoder.up_factors, decoder.up_channels, "decoder");
  if (encoder.total_factor() != decoder.total_factor()) {
    throw ArgumentError("encoder and decoder resampling factors differ");
  }
  if (encoder.latent_dim <= 0) throw ArgumentError("latent_dim must be positive");
  if (decoder.input_channels != encoder.latent_dim) {
    throw ArgumentError("decoder input channels must equal latent_dim");
  }
  if (!(log_sigma_min < log_sigma_max)) throw ArgumentError("invalid log_sigma clamp range");
}

WaveGanConfig inner_gan_config(const WaveGanConfig& base, int n_mels) {
  WaveGanConfig cfg = base;
  cfg.decoder.input_channels = n_mels;
  return cfg;
}

}  // namespace wavelatent::wavegan
