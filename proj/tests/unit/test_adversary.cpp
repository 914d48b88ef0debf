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

#include "wavelatent/adversary/discriminator.hpp"
#include "wavelatent/adversary/losses.hpp"
#include "wavelatent/errors.hpp"

namespace wavelatent {
namespace {

using adversary::DiscriminatorBank;
using adversary::DiscriminatorBankConfig;
using adversary::DiscriminatorOutput;

DiscriminatorBankConfig narrow_bank() {
  auto cfg = DiscriminatorBankConfig::defaults();
  cfg.base_channels = 4;
  cfg.max_channels = 16;
  return cfg;
}

// Outputs with constant score maps of varying sizes.
std::vector<DiscriminatorOutput> constant_scores(double value) {
  std::vector<DiscriminatorOutput> out;
  for (int s = 0; s < 6; ++s) {
    DiscriminatorOutput d;
    d.score = torch::full({2, 1, 3 + s, 5 + 2 * s}, value, torch::kFloat64);
    out.push_back(d);
  }
  return out;
}

std::vector<DiscriminatorOutput> random_features(std::uint64_t seed) {
  torch::manual_seed(seed);
  std::vector<DiscriminatorOutput> out;
  for (int s = 0; s < 3; ++s) {
    DiscriminatorOutput d;
    d.score = torch::randn({1, 1, 4, 4}, torch::kFloat64);
    for (int i = 0; i < 2; ++i) d.features.push_back(torch::randn({1, 2 + i, 5, 6 - s}, torch::kFloat64));
    out.push_back(d);
  }
  return out;
}

TEST(DiscriminatorBankConfig, DefaultsAreSixDistinctAnalyses) {
  auto cfg = DiscriminatorBankConfig::defaults();
  EXPECT_NO_THROW(cfg.validate());
  ASSERT_EQ(cfg.analyses.size(), 6u);
  const int ffts[] = {128, 256, 512, 1024, 2048, 4096};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(cfg.analyses[i].spectral.fft_size, ffts[i]);
    EXPECT_EQ(cfg.analyses[i].spectral.hop_size, ffts[i] / 4);
    EXPECT_EQ(cfg.analyses[i].spectral.window_size, ffts[i]);
    EXPECT_GE(cfg.analyses[i].n_mels, 10);
    EXPECT_LE(cfg.analyses[i].n_mels, 160);
  }
  EXPECT_EQ(cfg.layers, 5);
  EXPECT_EQ(cfg.base_channels, 32);
  EXPECT_EQ(cfg.min_samples(), 4096);
}

TEST(DiscriminatorBankConfig, RejectsWrongCountOrDuplicates) {
  auto cfg = DiscriminatorBankConfig::defaults();
  cfg.analyses.pop_back();
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = DiscriminatorBankConfig::defaults();
  cfg.analyses[5] = cfg.analyses[0];
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = DiscriminatorBankConfig::defaults();
  cfg.layers = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(DiscriminatorBankConfig, JsonRoundTrip) {
  auto cfg = narrow_bank();
  cfg.fmax = 8000.0;
  const nlohmann::json j = cfg;
  EXPECT_EQ(nlohmann::json(j.get<DiscriminatorBankConfig>()), j);
  EXPECT_EQ(nlohmann::json::object().get<DiscriminatorBankConfig>().analyses.size(), 6u);
}

class BankForward : public ::testing::Test {
 protected:
  void SetUp() override {
    torch::manual_seed(0);
    bank_ = DiscriminatorBank(narrow_bank(), 22050);
  }
  DiscriminatorBank bank_{nullptr};
};

TEST_F(BankForward, SixOutputsWithFiniteLayerFeatures) {
  torch::NoGradGuard ng;
  auto out = bank_->forward(torch::randn({2, 8192}) * 0.1);
  ASSERT_EQ(out.size(), 6u);
  for (const auto& d : out) {
    EXPECT_EQ(d.features.size(), 5u);
    EXPECT_EQ(d.score.size(0), 2);
    EXPECT_EQ(d.score.size(1), 1);
    EXPECT_TRUE(torch::isfinite(d.score).all().item<bool>());
    for (const auto& f : d.features) EXPECT_TRUE(torch::isfinite(f).all().item<bool>());
  }
}

TEST_F(BankForward, IsDeterministic) {
  torch::NoGradGuard ng;
  auto x = torch::randn({6000}) * 0.1;
  auto a = bank_->forward(x), b = bank_->forward(x.clone());
  for (std::size_t s = 0; s < a.size(); ++s) EXPECT_TRUE(torch::equal(a[s].score, b[s].score));
}

TEST_F(BankForward, LongerInputGivesWiderScoreMaps) {
  torch::NoGradGuard ng;
  auto shorter = bank_->forward(torch::randn({8192}) * 0.1);
  auto longer = bank_->forward(torch::randn({65536}) * 0.1);
  for (std::size_t s = 0; s < shorter.size(); ++s) {
    EXPECT_GT(longer[s].score.size(-1), shorter[s].score.size(-1));
    EXPECT_EQ(longer[s].score.size(-2), shorter[s].score.size(-2));
  }
}

TEST_F(BankForward, RejectsShortInput) {
  EXPECT_THROW(bank_->forward(torch::zeros({4095})), ArgumentError);
  EXPECT_NO_THROW(bank_->forward(torch::zeros({4096})));
}

TEST(LsganGeneratorLoss, ClosedForms) {
  EXPECT_DOUBLE_EQ(adversary::lsgan_generator_loss(constant_scores(1.0)).item<double>(), 0.0);
  EXPECT_DOUBLE_EQ(adversary::lsgan_generator_loss(constant_scores(0.0)).item<double>(), 1.0);
  EXPECT_DOUBLE_EQ(adversary::lsgan_generator_loss(constant_scores(0.5)).item<double>(), 0.25);
  EXPECT_THROW(adversary::lsgan_generator_loss({}), ArgumentError);
}

TEST(LsganDiscriminatorLoss, ClosedForms) {
  using adversary::lsgan_discriminator_loss;
  EXPECT_DOUBLE_EQ(lsgan_discriminator_loss(constant_scores(1.0), constant_scores(0.0)).item<double>(), 0.0);
  EXPECT_DOUBLE_EQ(lsgan_discriminator_loss(constant_scores(0.0), constant_scores(1.0)).item<double>(), 2.0);
  EXPECT_DOUBLE_EQ(lsgan_discriminator_loss(constant_scores(0.5), constant_scores(0.5)).item<double>(), 0.5);
  auto five = constant_scores(0.0);
  five.pop_back();
  EXPECT_THROW(lsgan_discriminator_loss(constant_scores(0.0), five), ArgumentError);
}

TEST(LsganLosses, PerfectSeparationIsConsistent) {
  auto real = constant_scores(1.0), fake = constant_scores(0.0);
  EXPECT_DOUBLE_EQ(adversary::lsgan_generator_loss(fake).item<double>(), 1.0);
  EXPECT_DOUBLE_EQ(adversary::lsgan_discriminator_loss(real, fake).item<double>(), 0.0);
}

TEST(LsganLosses, NonNegativeOnRandomScores) {
  torch::manual_seed(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto real = random_features(trial), fake = random_features(trial + 100);
    EXPECT_GE(adversary::lsgan_generator_loss(fake).item<double>(), 0.0);
    EXPECT_GE(adversary::lsgan_discriminator_loss(real, fake).item<double>(), 0.0);
  }
}

TEST(FeatureMatching, IdentityIsZero) {
  auto real = random_features(1);
  EXPECT_EQ(adversary::feature_matching_loss(real, real).item<double>(), 0.0);
}

TEST(FeatureMatching, ConstantOffsetContributesOffset) {
  auto real = random_features(2);
  auto fake = real;
  for (auto& d : fake) d.features = std::vector<torch::Tensor>(d.features.begin(), d.features.end());
  fake[1].features[0] = real[1].features[0] + 0.3;
  EXPECT_NEAR(adversary::feature_matching_loss(real, fake).item<double>(), 0.3, 1e-12);
}

TEST(FeatureMatching, SymmetricAndZeroOnlyOnAgreement) {
  auto a = random_features(3), b = random_features(4);
  const double ab = adversary::feature_matching_loss(a, b).item<double>();
  EXPECT_EQ(ab, adversary::feature_matching_loss(b, a).item<double>());
  EXPECT_GT(ab, 0.0);
  // A single differing element makes the loss positive.
  auto c = a;
  c[2].features[1] = a[2].features[1].clone();
  c[2].features[1].view({-1})[0] += 1e-3;
  EXPECT_GT(adversary::feature_matching_loss(a, c).item<double>(), 0.0);
}

TEST(FeatureMatching, StructureMismatchThrows) {
  auto a = random_features(5), b = random_features(6);
  b[0].features.pop_back();
  EXPECT_THROW(adversary::feature_matching_loss(a, b), ArgumentError);
  b = random_features(6);
  b[1].features[0] = torch::zeros({1, 7, 5, 5}, torch::kFloat64);
  EXPECT_THROW(adversary::feature_matching_loss(a, b), ArgumentError);
  b = random_features(6);
  b.pop_back();
  EXPECT_THROW(adversary::feature_matching_loss(a, b), ArgumentError);
}

// Gradients of all three losses through a one-layer bank, in double precision.
TEST(AdversaryGradients, MatchFiniteDifferences) {
  auto cfg = DiscriminatorBankConfig::defaults();
  const int ffts[] = {16, 24, 32, 40, 48, 64};
  for (int i = 0; i < 6; ++i) cfg.analyses[i] = {{ffts[i], ffts[i] / 4, ffts[i], signal::WindowKind::kHann}, 4};
  cfg.layers = 1;
  cfg.base_channels = 2;
  torch::manual_seed(12);
  DiscriminatorBank bank(cfg, 8000);
  bank->to(torch::kFloat64);
  auto real = (torch::randn({1, 160}, torch::kFloat64) * 0.3).set_requires_grad(false);
  auto fake = (torch::randn({1, 160}, torch::kFloat64) * 0.3).set_requires_grad(true);

  auto objective = [&]() {
    auto r = bank->forward(real), f = bank->forward(fake);
    return adversary::lsgan_generator_loss(f) + adversary::lsgan_discriminator_loss(r, f) +
           adversary::feature_matching_loss(r, f);
  };
  std::vector<torch::Tensor> inputs = bank->parameters();
  inputs.push_back(fake);
  auto grads = torch::autograd::grad({objective()}, inputs);

  std::mt19937 rng(4);
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    auto flat = inputs[p].view({-1});
    std::uniform_int_distribution<std::int64_t> pick(0, flat.size(0) - 1);
    for (int k = 0; k < 3; ++k) {
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
