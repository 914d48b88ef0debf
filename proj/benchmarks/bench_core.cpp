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

#include <benchmark/benchmark.h>
#include <torch/torch.h>

#include "wavelatent/flow/flow.hpp"
#include "wavelatent/flow/mas.hpp"
#include "wavelatent/signal/spectral.hpp"
#include "wavelatent/signal/stft_loss.hpp"
#include "wavelatent/wavegan/model.hpp"

namespace {

namespace wl = wavelatent;

void BM_Stft(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::set_num_threads(1);
  auto x = torch::randn({1, state.range(0)});
  const wl::signal::SpectralConfig cfg{1024, 256, 1024, wl::signal::WindowKind::kHann};
  for (auto _ : state) benchmark::DoNotOptimize(wl::signal::stft_magnitude(x, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(22050)->Arg(22050 * 4);

void BM_MultiResolutionLoss(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::set_num_threads(1);
  auto x = torch::randn({4, 8192}), y = torch::randn({4, 8192});
  const auto res = wl::signal::default_stft_resolutions();
  for (auto _ : state) benchmark::DoNotOptimize(wl::signal::multi_resolution_stft_loss(x, y, res));
}
BENCHMARK(BM_MultiResolutionLoss);

void BM_AlignmentSearch(benchmark::State& state) {
  torch::set_num_threads(1);
  const auto tokens = state.range(0);
  auto ll = torch::randn({tokens, tokens * 6}, torch::kFloat64);
  for (auto _ : state) benchmark::DoNotOptimize(wl::flow::monotonic_alignment_search(ll));
}
BENCHMARK(BM_AlignmentSearch)->Arg(20)->Arg(80);

void BM_Encode(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::set_num_threads(1);
  torch::manual_seed(0);
  wl::wavegan::WaveGan model{wl::wavegan::WaveGanConfig{}};
  model.train(false);
  auto x = torch::randn({22050}) * 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(model.encode(x).mu);
}
BENCHMARK(BM_Encode)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::set_num_threads(1);
  torch::manual_seed(0);
  wl::wavegan::WaveGan model{wl::wavegan::WaveGanConfig{}, /*decoder_only=*/true};
  model.train(false);
  auto z = torch::randn({1, 256, 86});
  for (auto _ : state) benchmark::DoNotOptimize(model.decode(z));
}
BENCHMARK(BM_Decode)->Unit(benchmark::kMillisecond);

void BM_FlowRoundTrip(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::set_num_threads(1);
  torch::manual_seed(0);
  wl::flow::FlowStack stack{wl::flow::FlowConfig{}};
  stack->eval();
  auto z = torch::randn({1, 256, state.range(0)});
  for (auto _ : state) benchmark::DoNotOptimize(stack->inverse(stack->forward(z).c));
}
BENCHMARK(BM_FlowRoundTrip)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
