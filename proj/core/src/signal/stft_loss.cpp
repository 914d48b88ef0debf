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

#include "wavelatent/signal/stft_loss.hpp"

#include "wavelatent/errors.hpp"

namespace wavelatent::signal {

std::vector<SpectralConfig> default_stft_resolutions() {
  return {
      {512, 50, 240, WindowKind::kHann},
      {1024, 120, 600, WindowKind::kHann},
      {2048, 240, 1200, WindowKind::kHann},
  };
}

StftLossTerms multi_resolution_stft_terms(const torch::Tensor& x, const torch::Tensor& x_hat,
                                          const std::vector<SpectralConfig>& cfgs) {
  if (cfgs.empty()) throw ArgumentError("at least one STFT resolution is required");
  if (x.sizes() != x_hat.sizes()) throw ArgumentError("STFT loss inputs differ in shape");

  auto sc = torch::zeros({}, x_hat.options());
  auto mag = torch::zeros({}, x_hat.options());
  for (const auto& cfg : cfgs) {
    auto s = stft_magnitude(x, cfg);
    auto s_hat = stft_magnitude(x_hat, cfg);
    // Floor keeps 0/0 at zero for silent references.
    auto ref_norm = torch::clamp_min(torch::linalg_vector_norm(s, 2), 1e-7);
    sc = sc + torch::linalg_vector_norm(s - s_hat, 2) / ref_norm;
    mag = mag + torch::mean(torch::abs(torch::clamp_min(s, kLogFloor).log() -
                                       torch::clamp_min(s_hat, kLogFloor).log()));
  }
  const double n = static_cast<double>(cfgs.size());
  StftLossTerms terms;
  terms.spectral_convergence = sc / n;
  terms.log_magnitude = mag / n;
  terms.total = terms.spectral_convergence + terms.log_magnitude;
  return terms;
}

torch::Tensor multi_resolution_stft_loss(const torch::Tensor& x, const torch::Tensor& x_hat,
                                         const std::vector<SpectralConfig>& cfgs) {
  return multi_resolution_stft_terms(x, x_hat, cfgs).total;
}

double multi_resolution_stft_loss(const Waveform& w, const Waveform& w_hat,
                                  const std::vector<SpectralConfig>& cfgs) {
  if (w.size() != w_hat.size()) throw ArgumentError("STFT loss inputs differ in length");
  torch::NoGradGuard no_grad;
  return multi_resolution_stft_loss(to_tensor(w), to_tensor(w_hat), cfgs).item<double>();
}

}  // namespace wavelatent::signal
