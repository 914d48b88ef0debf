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

#include "wavelatent/flow/mas.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::flow {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

void Alignment::validate(std::size_t n_frames, std::size_t n_tokens) const {
  if (token_of_frame.size() != n_frames || durations.size() != n_tokens) {
    throw ArgumentError("alignment does not match " + std::to_string(n_frames) + " frames and " +
                        std::to_string(n_tokens) + " tokens");
  }
  if (n_frames == 0 || n_tokens == 0) throw ArgumentError("alignment is empty");
  if (token_of_frame.front() != 0 || token_of_frame.back() != static_cast<int>(n_tokens) - 1) {
    throw ArgumentError("alignment must start at the first token and end at the last");
  }
  std::vector<int> counts(n_tokens, 0);
  for (std::size_t j = 0; j < n_frames; ++j) {
    const int i = token_of_frame[j];
    if (i < 0 || i >= static_cast<int>(n_tokens)) throw ArgumentError("alignment token out of range");
    if (j > 0) {
      const int step = i - token_of_frame[j - 1];
      if (step != 0 && step != 1) throw ArgumentError("alignment is not monotonic");
    }
    ++counts[static_cast<std::size_t>(i)];
  }
  if (counts != durations) throw ArgumentError("alignment durations disagree with its map");
}

Alignment Alignment::from_durations(const std::vector<int>& durations) {
  Alignment a;
  a.durations = durations;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] <= 0) throw ArgumentError("durations must be positive");
    a.token_of_frame.insert(a.token_of_frame.end(), static_cast<std::size_t>(durations[i]),
                            static_cast<int>(i));
  }
  return a;
}

torch::Tensor frame_log_likelihoods(const torch::Tensor& c, const torch::Tensor& mu,
                                    const torch::Tensor& log_sigma) {
  if (c.dim() != 2 || mu.dim() != 2 || mu.sizes() != log_sigma.sizes() || c.size(0) != mu.size(0)) {
    throw ArgumentError("frame_log_likelihoods expects c [C, N] and stats [C, M]");
  }
  auto precision = (-2.0 * log_sigma).exp();                        // [C, M]
  auto constant = (-log_sigma - kHalfLog2Pi).sum(0).unsqueeze(1);   // [M, 1]
  auto quad = -0.5 * torch::matmul(precision.t(), c.square());      // [M, N]
  auto cross = torch::matmul((mu * precision).t(), c);              // [M, N]
  auto mean_sq = -0.5 * (mu.square() * precision).sum(0).unsqueeze(1);
  return constant + quad + cross + mean_sq;
}

Alignment monotonic_alignment_search(const torch::Tensor& log_likelihood) {
  if (log_likelihood.dim() != 2) throw ArgumentError("MAS expects an [M, N] matrix");
  const auto m_tokens = log_likelihood.size(0);
  const auto n_frames = log_likelihood.size(1);
  if (m_tokens == 0) throw ArgumentError("MAS needs at least one token");
  if (n_frames < m_tokens) {
    throw AlignmentError("cannot align " + std::to_string(n_frames) + " frames onto " +
                         std::to_string(m_tokens) + " tokens");
  }
  auto ll = log_likelihood.detach().to(torch::kCPU, torch::kFloat64).contiguous();
  auto lp = ll.accessor<double, 2>();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const auto M = static_cast<std::size_t>(m_tokens);
  const auto N = static_cast<std::size_t>(n_frames);
  std::vector<double> q(M * N, kNegInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return q[i * N + j]; };

  at(0, 0) = lp[0][0];
  for (std::size_t j = 1; j < N; ++j) {
    // Token i is reachable at frame j only if i <= j and the remaining
    // frames can still cover the remaining tokens.
    const std::size_t lo = (M + j > N) ? M + j - N : 0;
    const std::size_t hi = std::min(j, M - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      const double stay = at(i, j - 1);
      const double move = i > 0 ? at(i - 1, j - 1) : kNegInf;
      at(i, j) = lp[static_cast<std::int64_t>(i)][static_cast<std::int64_t>(j)] + std::max(stay, move);
    }
  }

  Alignment a;
  a.token_of_frame.assign(N, 0);
  a.durations.assign(M, 0);
  std::size_t i = M - 1;
  for (std::size_t j = N; j-- > 0;) {
    a.token_of_frame[j] = static_cast<int>(i);
    ++a.durations[i];
    if (j > 0 && i > 0 && (i == j || at(i - 1, j - 1) > at(i, j - 1))) --i;
  }
  return a;
}

Alignment mas_align(const torch::Tensor& c, const PriorStats& prior) {
  torch::NoGradGuard no_grad;
  return monotonic_alignment_search(frame_log_likelihoods(c, prior.mu, prior.log_sigma));
}

torch::Tensor prior_loglik(const torch::Tensor& c, const PriorStats& prior, const Alignment& a) {
  if (c.dim() != 2 || prior.mu.dim() != 2) throw ArgumentError("prior_loglik expects [C, N] and [C, M]");
  a.validate(static_cast<std::size_t>(c.size(1)), static_cast<std::size_t>(prior.mu.size(1)));
  auto index = torch::tensor(std::vector<std::int64_t>(a.token_of_frame.begin(), a.token_of_frame.end()),
                             torch::kInt64)
                   .to(c.device());
  auto mu = prior.mu.index_select(1, index);
  auto ls = prior.log_sigma.index_select(1, index);
  auto ll = -ls - kHalfLog2Pi - 0.5 * (c - mu).square() * (-2.0 * ls).exp();
  return ll.sum();
}

}  // namespace wavelatent::flow
