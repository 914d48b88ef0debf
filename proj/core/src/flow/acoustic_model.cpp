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

#include "wavelatent/flow/acoustic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::flow {
namespace {

// Upper bound on predicted frames per token; keeps an untrained predictor
// from requesting unbounded output.
constexpr int kMaxFramesPerToken = 1000;

}  // namespace

DurationPredictorImpl::DurationPredictorImpl(int in_channels, const DurationPredictorConfig& cfg) {
  const int pad = cfg.kernel_size / 2;
  conv1_ = register_module("conv1", torch::nn::Conv1d(torch::nn::Conv1dOptions(in_channels, cfg.channels,
                                                                               cfg.kernel_size).padding(pad)));
  conv2_ = register_module("conv2", torch::nn::Conv1d(torch::nn::Conv1dOptions(cfg.channels, cfg.channels,
                                                                               cfg.kernel_size).padding(pad)));
  proj_ = register_module("proj", torch::nn::Conv1d(torch::nn::Conv1dOptions(cfg.channels, 1, 1)));
}

torch::Tensor DurationPredictorImpl::forward(const torch::Tensor& hidden, const torch::Tensor& mask) {
  auto x = torch::relu(conv1_(hidden * mask));
  x = torch::relu(conv2_(x * mask));
  return (proj_(x * mask) * mask).squeeze(1);
}

void AcousticModelConfig::validate() const {
  if (latent_dim <= 0) throw ArgumentError("latent_dim must be positive");
  if (flow.channels != latent_dim) throw ArgumentError("flow channels must equal latent_dim");
  if (!(temperature > 0.0)) throw ArgumentError("temperature must be positive");
  flow.validate();
}

AcousticModelImpl::AcousticModelImpl(const AcousticModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  text_ = register_module("text", TextEncoder(cfg_.text, cfg_.latent_dim));
  flow_ = register_module("flow", FlowStack(cfg_.flow));
  duration_ = register_module("duration", DurationPredictor(cfg_.text.hidden, cfg_.duration));
}

std::pair<torch::Tensor, torch::Tensor> AcousticModelImpl::batch_tokens(
    const std::vector<std::vector<std::int64_t>>& sequences) {
  std::size_t longest = 0;
  for (const auto& s : sequences) longest = std::max(longest, s.size());
  auto ids = torch::zeros({static_cast<std::int64_t>(sequences.size()), static_cast<std::int64_t>(longest)},
                          torch::kInt64);
  auto lengths = torch::zeros({static_cast<std::int64_t>(sequences.size())}, torch::kInt64);
  auto acc = ids.accessor<std::int64_t, 2>();
  for (std::size_t b = 0; b < sequences.size(); ++b) {
    for (std::size_t i = 0; i < sequences[b].size(); ++i) acc[b][i] = sequences[b][i];
    lengths[static_cast<std::int64_t>(b)] = static_cast<std::int64_t>(sequences[b].size());
  }
  return {ids, lengths};
}

TextEncoding AcousticModelImpl::encode_text(const std::vector<std::int64_t>& tokens) {
  if (tokens.empty()) throw ArgumentError("token sequence is empty");
  auto [ids, lengths] = batch_tokens({tokens});
  return text_(ids, lengths);
}

AcousticLosses AcousticModelImpl::compute_losses(const torch::Tensor& z, const torch::Tensor& z_lengths,
                                                 const torch::Tensor& tokens,
                                                 const torch::Tensor& token_lengths) {
  auto enc = text_(tokens, token_lengths);
  auto out = flow_->forward(z, z_lengths);
  const auto batch = z.size(0);
  const auto channels = z.size(1);

  AcousticLosses losses;
  auto log_prob = out.logdet.sum();
  std::int64_t total_frames = 0;
  std::int64_t total_tokens = 0;
  auto log_w = duration_(enc.hidden.detach(), enc.mask);
  auto duration_sq = torch::zeros({}, z.options());
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto n = z_lengths[b].item<std::int64_t>();
    const auto m = token_lengths[b].item<std::int64_t>();
    auto c_b = out.c[b].narrow(1, 0, n);
    PriorStats prior{enc.prior.mu[b].narrow(1, 0, m), enc.prior.log_sigma[b].narrow(1, 0, m)};
    auto alignment = mas_align(c_b.detach(), {prior.mu.detach(), prior.log_sigma.detach()});
    log_prob = log_prob + prior_loglik(c_b, prior, alignment);

    std::vector<float> log_d(alignment.durations.size());
    std::transform(alignment.durations.begin(), alignment.durations.end(), log_d.begin(),
                   [](int d) { return std::log(static_cast<float>(d)); });
    auto target = torch::tensor(log_d, z.options().requires_grad(false));
    duration_sq = duration_sq + (log_w[b].narrow(0, 0, m) - target).square().sum();

    total_frames += n;
    total_tokens += m;
    losses.alignments.push_back(std::move(alignment));
  }
  losses.nll_per_dim = -log_prob / static_cast<double>(total_frames * channels);
  losses.duration_loss = duration_sq / static_cast<double>(total_tokens);
  losses.total = losses.nll_per_dim + losses.duration_loss;
  return losses;
}

SynthesizedLatents AcousticModelImpl::synthesize_latents(const std::vector<std::int64_t>& tokens,
                                                         double temperature,
                                                         torch::Generator& generator) {
  if (tokens.empty()) throw ArgumentError("cannot synthesize from an empty token sequence");
  if (!(temperature > 0.0)) throw ArgumentError("temperature must be positive");
  torch::NoGradGuard no_grad;
  auto enc = encode_text(tokens);
  auto log_w = duration_(enc.hidden, enc.mask)[0];

  SynthesizedLatents out;
  out.durations.resize(tokens.size());
  auto lw = log_w.to(torch::kFloat64).contiguous();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double w = std::exp(std::min(lw[static_cast<std::int64_t>(i)].item<double>(), 20.0));
    out.durations[i] = std::clamp(static_cast<int>(std::ceil(w)), 1, kMaxFramesPerToken);
  }
  const auto alignment = Alignment::from_durations(out.durations);
  auto index = torch::tensor(std::vector<std::int64_t>(alignment.token_of_frame.begin(),
                                                       alignment.token_of_frame.end()),
                             torch::kInt64);
  auto mu = enc.prior.mu[0].index_select(1, index);
  auto sigma = enc.prior.log_sigma[0].index_select(1, index).exp();
  auto eps = torch::randn(mu.sizes(), generator, mu.options());
  auto c = mu + temperature * sigma * eps;
  const auto frames = static_cast<std::int64_t>(alignment.frames());
  out.z = flow_->inverse(c.unsqueeze(0), torch::full({1}, frames, torch::kInt64)).first;
  return out;
}

AcousticStepReport acoustic_train_step(AcousticModel& model, torch::optim::Optimizer& optimizer,
                                       const std::vector<const AcousticExample*>& batch,
                                       torch::Generator& generator) {
  if (batch.empty()) throw ArgumentError("acoustic training batch is empty");
  const auto channels = batch.front()->mu.size(0);
  std::int64_t longest = 0;
  std::vector<std::vector<std::int64_t>> token_lists;
  for (const auto* ex : batch) {
    longest = std::max(longest, ex->mu.size(1));
    token_lists.push_back(ex->tokens);
  }
  auto options = batch.front()->mu.options();
  auto z = torch::zeros({static_cast<std::int64_t>(batch.size()), channels, longest}, options);
  auto z_lengths = torch::zeros({static_cast<std::int64_t>(batch.size())}, torch::kInt64);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& ex = *batch[b];
    auto eps = torch::randn(ex.mu.sizes(), generator, options);
    z[static_cast<std::int64_t>(b)].narrow(1, 0, ex.mu.size(1)).copy_(ex.mu + ex.log_sigma.exp() * eps);
    z_lengths[static_cast<std::int64_t>(b)] = ex.mu.size(1);
  }
  auto [tokens, token_lengths] = AcousticModelImpl::batch_tokens(token_lists);

  model->train();
  auto losses = model->compute_losses(z, z_lengths, tokens, token_lengths);
  AcousticStepReport report;
  report.nll_per_dim = losses.nll_per_dim.item<double>();
  report.duration_loss = losses.duration_loss.item<double>();
  report.total = losses.total.item<double>();
  report.alignments = std::move(losses.alignments);
  if (!std::isfinite(report.total)) {
    report.applied = false;
    return report;
  }
  optimizer.zero_grad();
  losses.total.backward();
  optimizer.step();
  return report;
}

}  // namespace wavelatent::flow
