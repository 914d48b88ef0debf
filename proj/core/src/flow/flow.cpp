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

#include "wavelatent/flow/flow.hpp"

#include <algorithm>
#include <string>

#include "wavelatent/errors.hpp"

namespace wavelatent::flow {
namespace {

torch::Tensor frames_per_item(const torch::Tensor& mask) { return mask.sum({1, 2}); }

// Frame index to read for every output frame when padding each item to a
// multiple of `factor`. Frames [len, padded_len) repeat frame len - 1 unless
// `keep_existing` is set and the frame is present in the input.
struct SqueezePadding {
  torch::Tensor index;       // [B, 1, T_pad] int64
  torch::Tensor flow_mask;   // [B, 1, T_pad] frames inside the padded length
  torch::Tensor frame_mask;  // [B, 1, T_pad] true frames
  std::int64_t padded = 0;
};

SqueezePadding make_padding(const torch::Tensor& lengths, std::int64_t available, int factor,
                            bool keep_existing) {
  auto lens = lengths.to(torch::kCPU, torch::kInt64).contiguous();
  const auto batch = lens.size(0);
  std::int64_t max_len = available;
  for (std::int64_t b = 0; b < batch; ++b) max_len = std::max(max_len, lens[b].item<std::int64_t>());
  const std::int64_t padded = (max_len + factor - 1) / factor * factor;

  SqueezePadding p;
  p.padded = padded;
  p.index = torch::zeros({batch, 1, padded}, torch::kInt64);
  p.flow_mask = torch::zeros({batch, 1, padded}, torch::kFloat32);
  p.frame_mask = torch::zeros({batch, 1, padded}, torch::kFloat32);
  auto idx = p.index.accessor<std::int64_t, 3>();
  auto fm = p.flow_mask.accessor<float, 3>();
  auto tm = p.frame_mask.accessor<float, 3>();
  for (std::int64_t b = 0; b < batch; ++b) {
    const std::int64_t len = lens[b].item<std::int64_t>();
    if (len <= 0) throw ArgumentError("flow input lengths must be positive");
    const std::int64_t item_padded = (len + factor - 1) / factor * factor;
    for (std::int64_t t = 0; t < padded; ++t) {
      if (t < len) {
        idx[b][0][t] = t;
        tm[b][0][t] = 1.0f;
        fm[b][0][t] = 1.0f;
      } else if (t < item_padded) {
        idx[b][0][t] = (keep_existing && t < available) ? t : len - 1;
        fm[b][0][t] = 1.0f;
      } else {
        idx[b][0][t] = std::min<std::int64_t>(t, available - 1);
      }
    }
  }
  return p;
}

torch::Tensor gather_padded(const torch::Tensor& x, const SqueezePadding& p) {
  auto index = p.index.to(x.device()).expand({x.size(0), x.size(1), p.padded});
  return x.gather(2, index) * p.flow_mask.to(x.options());
}

}  // namespace

void FlowConfig::validate() const {
  if (channels <= 0 || blocks < 0 || squeeze <= 0 || hidden <= 0 || coupling_layers <= 0) {
    throw ArgumentError("invalid flow configuration");
  }
  if ((channels * squeeze) % 2 != 0) throw ArgumentError("squeezed flow width must be even");
}

torch::Tensor squeeze_frames(const torch::Tensor& x, int factor) {
  if (factor == 1) return x;
  const auto b = x.size(0), c = x.size(1), t = x.size(2);
  return x.view({b, c, t / factor, factor}).permute({0, 3, 1, 2}).reshape({b, c * factor, t / factor});
}

torch::Tensor unsqueeze_frames(const torch::Tensor& x, int factor) {
  if (factor == 1) return x;
  const auto b = x.size(0), c = x.size(1) / factor, t = x.size(2);
  return x.view({b, factor, c, t}).permute({0, 2, 3, 1}).reshape({b, c, t * factor});
}

ActNorm::ActNorm(int channels) {
  log_scale = register_parameter("log_scale", torch::zeros({1, channels, 1}));
  bias = register_parameter("bias", torch::zeros({1, channels, 1}));
  initialized = register_buffer("initialized", torch::zeros({1}));
}

std::pair<torch::Tensor, torch::Tensor> ActNorm::forward(const torch::Tensor& x,
                                                         const torch::Tensor& mask) {
  if (is_training() && initialized.item<double>() == 0.0) {
    torch::NoGradGuard no_grad;
    auto count = mask.sum().clamp_min(1.0);
    auto mean = (x * mask).sum({0, 2}, true) / count;
    auto var = (x.square() * mask).sum({0, 2}, true) / count - mean.square();
    auto log_std = 0.5 * var.clamp_min(1e-6).log();
    log_scale.copy_(-log_std);
    bias.copy_(-mean * (-log_std).exp());
    initialized.fill_(1.0);
  }
  auto y = (bias + log_scale.exp() * x) * mask;
  auto logdet = log_scale.sum() * frames_per_item(mask);
  return {y, logdet};
}

std::pair<torch::Tensor, torch::Tensor> ActNorm::inverse(const torch::Tensor& y,
                                                         const torch::Tensor& mask) {
  auto x = (y - bias) * (-log_scale).exp() * mask;
  return {x, -log_scale.sum() * frames_per_item(mask)};
}

InvertibleMix::InvertibleMix(int channels) {
  auto q = std::get<0>(torch::linalg_qr(torch::randn({channels, channels})));
  weight = register_parameter("weight", q.contiguous());
}

std::pair<torch::Tensor, torch::Tensor> InvertibleMix::forward(const torch::Tensor& x,
                                                               const torch::Tensor& mask) {
  auto y = torch::matmul(weight, x) * mask;
  auto logabsdet = std::get<1>(torch::linalg_slogdet(weight));
  return {y, logabsdet * frames_per_item(mask)};
}

std::pair<torch::Tensor, torch::Tensor> InvertibleMix::inverse(const torch::Tensor& y,
                                                               const torch::Tensor& mask) {
  // A single-precision LU inverse of a wide matrix loses about n * eps;
  // inverting in double keeps the round trip at float rounding.
  auto inv = torch::linalg_inv(weight.to(torch::kFloat64)).to(weight.scalar_type());
  auto x = torch::matmul(inv, y) * mask;
  auto logabsdet = std::get<1>(torch::linalg_slogdet(weight));
  return {x, -logabsdet * frames_per_item(mask)};
}

AffineCoupling::AffineCoupling(int channels, int hidden, int layers, int kernel_size)
    : half_(channels / 2), hidden_(hidden) {
  start_ = register_module("start", torch::nn::Conv1d(torch::nn::Conv1dOptions(half_, hidden, 1)));
  gates_ = register_module("gates", torch::nn::ModuleList());
  res_skip_ = register_module("res_skip", torch::nn::ModuleList());
  for (int i = 0; i < layers; ++i) {
    gates_->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(hidden, 2 * hidden, kernel_size).padding(kernel_size / 2)));
    const int out = i + 1 < layers ? 2 * hidden : hidden;
    res_skip_->push_back(torch::nn::Conv1d(torch::nn::Conv1dOptions(hidden, out, 1)));
  }
  end_ = register_module(
      "end", torch::nn::Conv1d(torch::nn::Conv1dOptions(hidden, 2 * (channels - half_), 1)));
  torch::NoGradGuard no_grad;
  end_->weight.zero_();
  end_->bias.zero_();
}

std::pair<torch::Tensor, torch::Tensor> AffineCoupling::shift_and_log_scale(
    const torch::Tensor& xa, const torch::Tensor& mask) {
  auto h = start_(xa) * mask;
  torch::Tensor skip;
  for (std::size_t i = 0; i < gates_->size(); ++i) {
    auto a = gates_[i]->as<torch::nn::Conv1d>()->forward(h);
    auto parts = a.split(hidden_, 1);
    auto acts = torch::tanh(parts[0]) * torch::sigmoid(parts[1]);
    auto rs = res_skip_[i]->as<torch::nn::Conv1d>()->forward(acts);
    if (i + 1 < gates_->size()) {
      auto rs_parts = rs.split(hidden_, 1);
      h = (h + rs_parts[0]) * mask;
      skip = skip.defined() ? skip + rs_parts[1] : rs_parts[1];
    } else {
      skip = skip.defined() ? skip + rs : rs;
    }
  }
  auto out = end_(skip) * mask;
  auto parts = out.chunk(2, 1);
  return {parts[0], parts[1]};
}

std::pair<torch::Tensor, torch::Tensor> AffineCoupling::forward(const torch::Tensor& x,
                                                                const torch::Tensor& mask) {
  auto xa = x.narrow(1, 0, half_);
  auto xb = x.narrow(1, half_, x.size(1) - half_);
  auto [shift, log_scale] = shift_and_log_scale(xa, mask);
  auto yb = (shift + log_scale.exp() * xb) * mask;
  return {torch::cat({xa, yb}, 1), (log_scale * mask).sum({1, 2})};
}

std::pair<torch::Tensor, torch::Tensor> AffineCoupling::inverse(const torch::Tensor& y,
                                                                const torch::Tensor& mask) {
  auto ya = y.narrow(1, 0, half_);
  auto yb = y.narrow(1, half_, y.size(1) - half_);
  auto [shift, log_scale] = shift_and_log_scale(ya, mask);
  auto xb = (yb - shift) * (-log_scale).exp() * mask;
  return {torch::cat({ya, xb}, 1), -(log_scale * mask).sum({1, 2})};
}

FlowStackImpl::FlowStackImpl(const FlowConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const int width = cfg_.channels * cfg_.squeeze;
  for (int i = 0; i < cfg_.blocks; ++i) {
    append(std::make_shared<ActNorm>(width));
    append(std::make_shared<InvertibleMix>(width));
    append(std::make_shared<AffineCoupling>(width, cfg_.hidden, cfg_.coupling_layers,
                                            cfg_.kernel_size));
  }
}

void FlowStackImpl::append(std::shared_ptr<InvertibleTransform> step) {
  register_module("step" + std::to_string(steps_.size()), step);
  steps_.push_back(std::move(step));
}

FlowOutput FlowStackImpl::forward(const torch::Tensor& z, const torch::Tensor& lengths) {
  if (z.dim() != 3 || z.size(1) != cfg_.channels) {
    throw ArgumentError("flow expects [B, " + std::to_string(cfg_.channels) + ", T] input");
  }
  const int s = cfg_.squeeze;
  auto pad = make_padding(lengths, z.size(2), s, /*keep_existing=*/false);
  auto flow_mask = pad.flow_mask.to(z.options());
  auto x = squeeze_frames(gather_padded(z, pad), s);
  auto mask = flow_mask.slice(2, 0, pad.padded, s);
  auto logdet = torch::zeros({z.size(0)}, z.options());
  for (const auto& step : steps_) {
    auto [y, ld] = step->forward(x, mask);
    x = y;
    logdet = logdet + ld;
  }
  return {unsqueeze_frames(x, s) * flow_mask, pad.frame_mask.to(z.options()), logdet};
}

FlowOutput FlowStackImpl::forward(const torch::Tensor& z) {
  return forward(z, torch::full({z.size(0)}, z.size(2), torch::kInt64));
}

std::pair<torch::Tensor, torch::Tensor> FlowStackImpl::inverse(const torch::Tensor& c,
                                                               const torch::Tensor& lengths) {
  if (c.dim() != 3 || c.size(1) != cfg_.channels) {
    throw ArgumentError("flow expects [B, " + std::to_string(cfg_.channels) + ", T] input");
  }
  const int s = cfg_.squeeze;
  auto pad = make_padding(lengths, c.size(2), s, /*keep_existing=*/true);
  auto flow_mask = pad.flow_mask.to(c.options());
  auto x = squeeze_frames(gather_padded(c, pad), s);
  auto mask = flow_mask.slice(2, 0, pad.padded, s);
  auto logdet = torch::zeros({c.size(0)}, c.options());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    auto [y, ld] = (*it)->inverse(x, mask);
    x = y;
    logdet = logdet + ld;
  }
  const auto max_len = lengths.max().item<std::int64_t>();
  auto z = (unsqueeze_frames(x, s) * pad.frame_mask.to(c.options())).narrow(2, 0, max_len);
  return {z, logdet};
}

torch::Tensor FlowStackImpl::inverse(const torch::Tensor& c) {
  return inverse(c, torch::full({c.size(0)}, c.size(2), torch::kInt64)).first;
}

}  // namespace wavelatent::flow
