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
#include <vector>

#include <torch/torch.h>

#include "wavelatent/flow/text_encoder.hpp"

namespace wavelatent::flow {

/// Monotonic surjective frame-to-token map. Indices are zero-based:
/// token_of_frame[0] == 0, token_of_frame.back() == M - 1, and consecutive
/// entries differ by 0 or 1.
struct Alignment {
  std::vector<int> token_of_frame;
  std::vector<int> durations;

  std::size_t frames() const { return token_of_frame.size(); }
  std::size_t tokens() const { return durations.size(); }

  /// Throws ArgumentError unless the map is a valid alignment of `frames`
  /// frames onto `tokens` tokens.
  void validate(std::size_t frames, std::size_t tokens) const;

  static Alignment from_durations(const std::vector<int>& durations);
};

/// [M, N] matrix of sum_k log N(c[k, j]; mu[k, i], exp(log_sigma[k, i])^2)
/// for latent frames c [C, N] and token statistics [C, M]. Differentiable.
torch::Tensor frame_log_likelihoods(const torch::Tensor& c, const torch::Tensor& mu,
                                    const torch::Tensor& log_sigma);

/// Viterbi-style dynamic program over an [M, N] log-likelihood matrix: the
/// monotonic surjective alignment with the largest total log-likelihood.
/// Throws AlignmentError when N < M.
Alignment monotonic_alignment_search(const torch::Tensor& log_likelihood);

/// MAS for one utterance: c is [C, N], prior tensors are [C, M].
Alignment mas_align(const torch::Tensor& c, const PriorStats& prior);

/// sum_j log N(c_j; mu_{A(j)}, sigma_{A(j)}) for one utterance ([C, N] and
/// [C, M] tensors). Throws ArgumentError when the alignment does not fit.
torch::Tensor prior_loglik(const torch::Tensor& c, const PriorStats& prior, const Alignment& a);

}  // namespace wavelatent::flow
