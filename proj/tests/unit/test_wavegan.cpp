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

#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <torch/torch.h>

#include "oracles.hpp"
#include "wavelatent/errors.hpp"
#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/stft_loss.hpp"
#include "wavelatent/wavegan/losses.hpp"
#include "wavelatent/wavegan/model.hpp"

namespace wavelatent {
namespace {

using wavegan::LatentPosterior;
using wavegan::WaveGan;
using wavegan::WaveGanConfig;

// Narrow model with the full 256x resampling chain and 256-d latents.
WaveGanConfig slim_config() {
  WaveGanConfig cfg;
  cfg.encoder.pre_channels = 8;
  cfg.encoder.down_channels = {8, 16, 16, 32};
  cfg.decoder.pre_channels = 32;
  cfg.decoder.up_channels = {16, 16, 8, 8};
  cfg.pitch.channels = 16;
  return cfg;
}

// One stage, latent_dim 8: small enough for finite differences.
WaveGanConfig tiny_config() {
  WaveGanConfig cfg;
  cfg.encoder.pre_channels = 3;
  cfg.encoder.down_factors = {4};
  cfg.encoder.down_channels = {4};
  cfg.encoder.latent_dim = 8;
  cfg.encoder.dilations = {1, 3};
  cfg.decoder.input_channels = 8;
  cfg.decoder.pre_channels = 4;
  cfg.decoder.up_factors = {4};
  cfg.decoder.up_channels = {3};
  cfg.decoder.dilations = {1, 3};
  cfg.pitch.channels = 4;
  cfg.pitch.kernel_size = 3;
  return cfg;
}

TEST(WaveGanConfig, DefaultsDescribeThe256xModel) {
  WaveGanConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.encoder.down_factors, (std::vector<int>{2, 4, 4, 8}));
  EXPECT_EQ(cfg.encoder.down_channels, (std::vector<int>{128, 128, 256, 512}));
  EXPECT_EQ(cfg.decoder.up_factors, (std::vector<int>{8, 4, 4, 2}));
  EXPECT_EQ(cfg.decoder.up_channels, (std::vector<int>{256, 128, 128, 64}));
  EXPECT_EQ(cfg.encoder.latent_dim, 256);
  EXPECT_EQ(cfg.hop_size(), 256);
  EXPECT_EQ(cfg.decoder.total_factor(), 256);
}

TEST(WaveGanConfig, RejectsInconsistentStages) {
  auto cfg = WaveGanConfig{};
  cfg.decoder.up_factors = {8, 4, 4, 4};
  cfg.decoder.up_channels = {256, 128, 128, 64};
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = WaveGanConfig{};
  cfg.encoder.down_factors = {2, 4, 4, 8, 2};
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = WaveGanConfig{};
  cfg.decoder.input_channels = 128;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(WaveGanConfig, JsonRoundTrip) {
  auto cfg = slim_config();
  cfg.stop_gradient_pitch = true;
  const nlohmann::json j = cfg;
  const auto back = j.get<WaveGanConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  // Missing keys fall back to defaults.
  const auto partial = nlohmann::json::parse(R"({"encoder": {"latent_dim": 256}})").get<WaveGanConfig>();
  EXPECT_EQ(partial.encoder.down_factors, (std::vector<int>{2, 4, 4, 8}));
}

class WaveGanShapes : public ::testing::Test {
 protected:
  void SetUp() override {
    torch::manual_seed(0);
    model_ = std::make_unique<WaveGan>(slim_config());
  }
  std::unique_ptr<WaveGan> model_;
};

TEST_F(WaveGanShapes, EncodeYieldsCeilFramesOf256Channels) {
  torch::NoGradGuard ng;
  auto post = model_->encode(torch::randn({25600}) * 0.1);
  EXPECT_EQ(post.mu.sizes(), (std::vector<std::int64_t>{1, 256, 100}));
  EXPECT_EQ(post.log_sigma.sizes(), post.mu.sizes());
  EXPECT_EQ(model_->encode(torch::randn({25601}) * 0.1).frames(), 101);
  EXPECT_TRUE(torch::isfinite(post.mu).all().item<bool>());
  EXPECT_GT(post.sigma().min().item<float>(), 0.0f);
}

TEST_F(WaveGanShapes, EncodeRejectsShortInput) {
  EXPECT_THROW(model_->encode(torch::zeros({255})), ArgumentError);
  EXPECT_NO_THROW(model_->encode(torch::zeros({256})));
}

TEST_F(WaveGanShapes, EncodeIsDeterministic) {
  torch::NoGradGuard ng;
  auto x = torch::randn({3000}) * 0.2;
  auto a = model_->encode(x), b = model_->encode(x.clone());
  EXPECT_TRUE(torch::equal(a.mu, b.mu));
  EXPECT_TRUE(torch::equal(a.log_sigma, b.log_sigma));
}

TEST_F(WaveGanShapes, DecodeYields256SamplesPerFrame) {
  torch::NoGradGuard ng;
  auto z = torch::randn({1, 256, 100}) * 3.0;
  auto y = model_->decode(z);
  EXPECT_EQ(y.sizes(), (std::vector<std::int64_t>{1, 25600}));
  EXPECT_LE(y.abs().max().item<float>(), 1.0f);
  EXPECT_TRUE(torch::equal(y, model_->decode(z)));
  EXPECT_THROW(model_->decode(torch::randn({1, 255, 4})), ArgumentError);
}

TEST_F(WaveGanShapes, ShapeDualityOverRandomLengths) {
  torch::NoGradGuard ng;
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> len(256, 9000);
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(5);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = len(rng);
    auto x = torch::randn({n}) * 0.1;
    auto post = model_->encode(x);
    const std::int64_t frames = (n + 255) / 256;
    EXPECT_EQ(post.frames(), frames);
    EXPECT_EQ(model_->decode(wavegan::sample_latent(post, gen)).size(1), 256 * frames);
    signal::Waveform w{std::vector<float>(x.data_ptr<float>(), x.data_ptr<float>() + n), 22050};
    EXPECT_EQ(static_cast<std::int64_t>(signal::extract_pitch(w, 256).frames()), frames);
  }
}

TEST_F(WaveGanShapes, PitchHeadKeepsFrameCount) {
  torch::NoGradGuard ng;
  auto f0 = model_->predict_pitch(torch::randn({2, 256, 94}));
  EXPECT_EQ(f0.sizes(), (std::vector<std::int64_t>{2, 94}));
}

TEST(SampleLatent, DegenerateScaleReturnsMean) {
  LatentPosterior post{torch::randn({1, 8, 5}, torch::kFloat64), torch::full({1, 8, 5}, -20.0, torch::kFloat64)};
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(1);
  auto z = wavegan::sample_latent(post, gen);
  EXPECT_LT((z - post.mu).abs().max().item<double>(), 1e-8);
}

TEST(SampleLatent, SeededDrawsRepeat) {
  LatentPosterior post{torch::randn({2, 8, 5}), torch::randn({2, 8, 5}) * 0.3};
  auto g1 = torch::make_generator<torch::CPUGeneratorImpl>(42);
  auto g2 = torch::make_generator<torch::CPUGeneratorImpl>(42);
  EXPECT_TRUE(torch::equal(wavegan::sample_latent(post, g1), wavegan::sample_latent(post, g2)));
}

TEST(SampleLatent, MonteCarloMeanMatchesMu) {
  const int n = 100000;
  auto mu = torch::tensor({0.5, -1.0, 2.0, 0.0}, torch::kFloat64).view({1, 4, 1});
  auto ls = torch::tensor({0.0, -1.0, 0.5, -2.0}, torch::kFloat64).view({1, 4, 1});
  LatentPosterior post{mu.expand({1, 4, n}), ls.expand({1, 4, n})};
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(7);
  auto mean = wavegan::sample_latent(post, gen).mean(-1).view({4});
  for (int c = 0; c < 4; ++c) {
    const double sigma = std::exp(ls.view({4})[c].item<double>());
    EXPECT_NEAR(mean[c].item<double>(), mu.view({4})[c].item<double>(), 5.0 * sigma / std::sqrt(n));
  }
}

TEST(SampleLatent, IsDifferentiableInBothStatistics) {
  auto mu = torch::randn({1, 4, 3}).requires_grad_(true);
  auto ls = torch::randn({1, 4, 3}).requires_grad_(true);
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(3);
  wavegan::sample_latent({mu, ls}, gen).sum().backward();
  EXPECT_TRUE(torch::allclose(mu.grad(), torch::ones_like(mu)));
  EXPECT_GT(ls.grad().abs().sum().item<float>(), 0.0f);
}

TEST(KlLoss, ClosedFormExamples) {
  LatentPosterior prior{torch::zeros({1, 256, 7}), torch::zeros({1, 256, 7})};
  EXPECT_EQ(wavegan::kl_loss(prior).item<float>(), 0.0f);
  LatentPosterior one{torch::ones({1, 1, 1}), torch::zeros({1, 1, 1})};
  EXPECT_FLOAT_EQ(wavegan::kl_loss(one).item<float>(), 0.5f);
}

TEST(KlLoss, NonNegativeOnRandomPosteriors) {
  torch::manual_seed(4);
  for (int trial = 0; trial < 20; ++trial) {
    LatentPosterior post{torch::randn({2, 16, 9}) * 2.0, torch::randn({2, 16, 9})};
    EXPECT_GE(wavegan::kl_loss(post).item<float>(), 0.0f);
  }
}

TEST(KlLoss, MatchesMonteCarloEstimate) {
  auto mu = torch::tensor({0.3, -1.2, 0.8, 0.0}, torch::kFloat64).view({1, 4, 1});
  auto ls = torch::tensor({-0.5, 0.4, 0.1, -1.0}, torch::kFloat64).view({1, 4, 1});
  const double closed = wavegan::kl_loss({mu, ls}).item<double>();
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(11);
  auto eps = torch::randn({1, 4, 1000000}, gen, torch::kFloat64);
  auto z = mu + ls.exp() * eps;
  // log q(z) - log p(z), per element, averaged like kl_loss.
  auto log_q = -0.5 * eps.square() - ls;
  auto log_p = -0.5 * z.square();
  const double mc = (log_q - log_p).mean().item<double>();
  EXPECT_NEAR(mc, closed, 0.01 * closed);
}

TEST(PitchLoss, ExamplesAndMasking) {
  auto target = torch::log(torch::full({1, 10}, 200.0));
  auto voiced = torch::ones({1, 10}, torch::kBool);
  auto same = wavegan::pitch_loss(target, target, voiced);
  EXPECT_TRUE(same.has_voiced);
  EXPECT_EQ(same.value.item<float>(), 0.0f);
  auto offset = wavegan::pitch_loss(target + 0.1, target, voiced);
  EXPECT_NEAR(offset.value.item<float>(), 0.1f, 1e-6);
  auto none = wavegan::pitch_loss(target + 5.0, target, torch::zeros({1, 10}, torch::kBool));
  EXPECT_FALSE(none.has_voiced);
  EXPECT_EQ(none.value.item<float>(), 0.0f);
  // Unvoiced frames do not contribute.
  auto partial_mask = voiced.clone();
  partial_mask[0].narrow(0, 5, 5).fill_(false);
  auto pred = target.clone();
  pred[0].narrow(0, 5, 5).add_(3.0);
  EXPECT_EQ(wavegan::pitch_loss(pred, target, partial_mask).value.item<float>(), 0.0f);
  EXPECT_THROW(wavegan::pitch_loss(torch::zeros({1, 9}), target, voiced), ArgumentError);
}

TEST(PitchGradient, ReachesEncoderOnlyWithoutStopGradient) {
  for (bool stop : {false, true}) {
    auto cfg = slim_config();
    cfg.stop_gradient_pitch = stop;
    torch::manual_seed(1);
    WaveGan model(cfg);
    auto post = model.encode(torch::randn({2048}) * 0.1);
    auto pred = model.predict_pitch(post.mu);
    auto loss = wavegan::pitch_loss(pred, torch::full_like(pred, 5.0), torch::ones_like(pred, torch::kBool));
    auto enc = model.encoder_parameters();
    auto grads = torch::autograd::grad({loss.value}, enc, {}, false, false, /*allow_unused=*/true);
    double norm = 0.0;
    for (auto& g : grads) {
      if (g.defined()) norm += g.abs().sum().item<double>();
    }
    if (stop) {
      EXPECT_EQ(norm, 0.0);
    } else {
      EXPECT_GT(norm, 0.0);
    }
  }
}

TEST(WaveGanGradients, MatchFiniteDifferences) {
  torch::manual_seed(3);
  WaveGan model(tiny_config());
  model.to(torch::kFloat64);
  auto audio = torch::randn({1, 128}, torch::kFloat64) * 0.3;
  auto target_f0 = torch::full({1, 32}, std::log(150.0), torch::kFloat64);
  auto voiced = torch::ones({1, 32}, torch::kBool);
  const std::vector<signal::SpectralConfig> res{{32, 8, 32, signal::WindowKind::kHann}};

  auto objective = [&]() {
    auto post = model.encode(audio);
    auto gen = torch::make_generator<torch::CPUGeneratorImpl>(9);
    auto z = wavegan::sample_latent(post, gen);
    auto y = model.decode(z);
    return signal::multi_resolution_stft_loss(audio, y, res) + 0.1 * wavegan::kl_loss(post) +
           wavegan::pitch_loss(model.predict_pitch(z), target_f0, voiced).value;
  };

  std::vector<torch::Tensor> params;
  for (auto group : {model.encoder_parameters(), model.decoder_parameters(), model.pitch_parameters()}) {
    params.insert(params.end(), group.begin(), group.end());
  }
  auto grads = torch::autograd::grad({objective()}, params);
  std::mt19937 rng(2);
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto flat = params[p].view({-1});
    std::uniform_int_distribution<std::int64_t> pick(0, flat.size(0) - 1);
    for (int k = 0; k < 2; ++k) {
      const auto i = pick(rng);
      const double orig = flat[i].item<double>();
      const double eps = 1e-6;
      double up, down;
      {
        torch::NoGradGuard ng;
        flat[i].fill_(orig + eps);
        up = objective().item<double>();
        flat[i].fill_(orig - eps);
        down = objective().item<double>();
        flat[i].fill_(orig);
      }
      const double numeric = (up - down) / (2 * eps);
      const double analytic = grads[p].view({-1})[i].item<double>();
      num += (numeric - analytic) * (numeric - analytic);
      den += numeric * numeric;
    }
  }
  EXPECT_LT(std::sqrt(num / den), 1e-3);
}

}  // namespace
}  // namespace wavelatent
