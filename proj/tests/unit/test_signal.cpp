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
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <torch/torch.h>

#include "oracles.hpp"
#include "wavelatent/errors.hpp"
#include "wavelatent/signal/pitch.hpp"
#include "wavelatent/signal/resample.hpp"
#include "wavelatent/signal/spectral.hpp"
#include "wavelatent/signal/stft_loss.hpp"
#include "wavelatent/signal/wav_io.hpp"

namespace wavelatent {
namespace {

using signal::SpectralConfig;
using signal::Waveform;
using signal::WindowKind;

Waveform sine(double hz, int rate, std::size_t n, double amp = 0.5) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / rate));
  }
  return w;
}

std::vector<double> as_double(const Waveform& w) { return {w.samples.begin(), w.samples.end()}; }

// Minimal PCM16 WAV writer, independent of the library's encoder.
void write_pcm16(const std::filesystem::path& path, int rate, int channels,
                 const std::vector<std::int16_t>& interleaved, std::uint16_t format = 1) {
  auto u32 = [](std::ofstream& o, std::uint32_t v) { o.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [](std::ofstream& o, std::uint16_t v) { o.write(reinterpret_cast<const char*>(&v), 2); };
  std::ofstream o(path, std::ios::binary);
  const std::uint32_t data = static_cast<std::uint32_t>(interleaved.size() * 2);
  o.write("RIFF", 4);
  u32(o, 36 + data);
  o.write("WAVEfmt ", 8);
  u32(o, 16);
  u16(o, format);
  u16(o, static_cast<std::uint16_t>(channels));
  u32(o, static_cast<std::uint32_t>(rate));
  u32(o, static_cast<std::uint32_t>(rate * channels * 2));
  u16(o, static_cast<std::uint16_t>(channels * 2));
  u16(o, 16);
  o.write("data", 4);
  u32(o, data);
  o.write(reinterpret_cast<const char*>(interleaved.data()), data);
}

class WavIoTest : public ::testing::Test {
 protected:
  std::filesystem::path dir_ = testing::make_temp_dir("wl_wav");
  void TearDown() override { std::filesystem::remove_all(dir_); }
};

TEST_F(WavIoTest, Pcm16FullScaleMapsBelowOne) {
  write_pcm16(dir_ / "peak.wav", 22050, 1, {0, 32767, -32768});
  auto w = signal::load_waveform(dir_ / "peak.wav");
  ASSERT_EQ(w.size(), 3u);
  EXPECT_FLOAT_EQ(w.samples[1], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(w.samples[2], -1.0f);
}

TEST_F(WavIoTest, OppositeStereoChannelsAverageToSilence) {
  std::vector<std::int16_t> frames;
  for (int i = 0; i < 100; ++i) {
    frames.push_back(16384);
    frames.push_back(-16384);
  }
  write_pcm16(dir_ / "stereo.wav", 22050, 2, frames);
  auto w = signal::load_waveform(dir_ / "stereo.wav");
  ASSERT_EQ(w.size(), 100u);
  for (float s : w.samples) EXPECT_EQ(s, 0.0f);
}

TEST_F(WavIoTest, OneSecondFileHasRateSamples) {
  write_pcm16(dir_ / "sec.wav", 22050, 1, std::vector<std::int16_t>(22050, 7));
  auto w = signal::load_waveform(dir_ / "sec.wav");
  EXPECT_EQ(w.size(), 22050u);
  EXPECT_EQ(w.sample_rate, 22050);
  EXPECT_DOUBLE_EQ(w.duration_seconds(), 1.0);
}

TEST_F(WavIoTest, RoundTripsBothEncodings) {
  auto w = sine(330.0, 24000, 1000, 0.7);
  signal::save_waveform(dir_ / "f.wav", w, signal::WavEncoding::kFloat32);
  signal::save_waveform(dir_ / "i.wav", w, signal::WavEncoding::kPcm16);
  auto f = signal::load_waveform(dir_ / "f.wav");
  auto i = signal::load_waveform(dir_ / "i.wav");
  EXPECT_EQ(f.samples, w.samples);
  ASSERT_EQ(i.size(), w.size());
  for (std::size_t n = 0; n < w.size(); ++n) EXPECT_NEAR(i.samples[n], w.samples[n], 1.0 / 32768.0);
}

TEST_F(WavIoTest, ErrorsAreClassified) {
  EXPECT_THROW(signal::load_waveform(dir_ / "missing.wav"), IoError);
  std::ofstream(dir_ / "junk.wav") << "definitely not audio";
  EXPECT_THROW(signal::load_waveform(dir_ / "junk.wav"), FormatError);
  write_pcm16(dir_ / "adpcm.wav", 8000, 1, {1, 2, 3}, /*format=*/2);
  EXPECT_THROW(signal::load_waveform(dir_ / "adpcm.wav"), FormatError);
}

TEST(Waveform, PeakNormalizationAndValidation) {
  auto w = signal::peak_normalize(sine(100.0, 8000, 800, 0.3));
  float peak = 0.0f;
  for (float s : w.samples) peak = std::max(peak, std::abs(s));
  EXPECT_NEAR(peak, 0.95f, 1e-6);
  EXPECT_NO_THROW(signal::validate(w));
  w.samples[3] = 1.5f;
  EXPECT_THROW(signal::validate(w), ArgumentError);
  w.samples[3] = std::nanf("");
  EXPECT_THROW(signal::validate(w), ArgumentError);
  EXPECT_THROW(signal::validate(Waveform{{}, 16000}), ArgumentError);
}

TEST(Resample, EqualRateIsIdentity) {
  auto w = sine(440.0, 22050, 5000);
  EXPECT_EQ(signal::resample(w, 22050).samples, w.samples);
}

TEST(Resample, LengthFollowsRateRatio) {
  auto out = signal::resample(sine(440.0, 44100, 44100), 24000);
  EXPECT_EQ(out.sample_rate, 24000);
  EXPECT_EQ(out.size(), 24000u);
  // Duration preserved within one output sample period for awkward ratios.
  for (std::size_t n : {1u, 17u, 1001u, 22051u}) {
    auto r = signal::resample(sine(100.0, 22050, n), 16000);
    EXPECT_LE(std::abs(r.duration_seconds() - n / 22050.0), 1.0 / 16000.0) << n;
  }
}

TEST(Resample, SineKeepsItsFrequency) {
  auto out = signal::resample(sine(440.0, 22050, 22050), 16000);
  const auto all = as_double(out);
  std::vector<double> x(all.begin(), all.begin() + 8000);
  const auto mag = testing::naive_dft_magnitude(x);
  const auto peak = std::max_element(mag.begin(), mag.end()) - mag.begin();
  const double bin_hz = 16000.0 / 8000.0;
  EXPECT_NEAR(peak * bin_hz, 440.0, bin_hz);
}

TEST(Resample, RoundTripPreservesBandLimitedEnergy) {
  Waveform w{std::vector<float>(24000), 24000};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double t = static_cast<double>(i) / 24000.0;
    w.samples[i] = static_cast<float>(0.3 * std::sin(2 * std::numbers::pi * 300 * t) +
                                      0.2 * std::sin(2 * std::numbers::pi * 1250 * t + 0.4) +
                                      0.1 * std::sin(2 * std::numbers::pi * 3100 * t + 1.1));
  }
  auto back = signal::resample(signal::resample(w, 16000), 24000);
  ASSERT_EQ(back.size(), w.size());
  double e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    e0 += w.samples[i] * w.samples[i];
    e1 += back.samples[i] * back.samples[i];
  }
  EXPECT_NEAR(e1 / e0, 1.0, 0.01);
}

TEST(Stft, MatchesNaiveDft) {
  std::mt19937 rng(3);
  std::normal_distribution<float> g(0.0f, 0.3f);
  for (auto [len, fft, hop, win] : std::vector<std::array<int, 4>>{
           {4096, 512, 128, 512}, {1000, 256, 64, 200}, {777, 128, 50, 128}}) {
    std::vector<float> x(static_cast<std::size_t>(len));
    for (auto& v : x) v = g(rng);
    SpectralConfig cfg{fft, hop, win, WindowKind::kHann};
    auto got = signal::stft_magnitude(torch::tensor(x), cfg);
    const auto want = testing::naive_stft_magnitude({x.begin(), x.end()}, fft, hop, win, true);
    ASSERT_EQ(got.size(0), static_cast<std::int64_t>(want.size()));
    ASSERT_EQ(got.size(1), fft / 2 + 1);
    double max_ref = 0.0, max_err = 0.0;
    auto acc = got.accessor<float, 2>();
    for (std::size_t t = 0; t < want.size(); ++t) {
      for (std::size_t k = 0; k < want[t].size(); ++k) {
        max_ref = std::max(max_ref, want[t][k]);
        max_err = std::max(max_err, std::abs(want[t][k] - acc[static_cast<long>(t)][static_cast<long>(k)]));
      }
    }
    EXPECT_LT(max_err / max_ref, 1e-5) << "fft " << fft;
  }
}

TEST(Stft, FrameCountFollowsCenteringPolicy) {
  SpectralConfig cfg{1024, 256, 1024, WindowKind::kHann};
  for (std::int64_t n : {600, 1024, 25600, 25601}) {
    auto mag = signal::stft_magnitude(torch::zeros({n}), cfg);
    EXPECT_EQ(mag.size(0), 1 + n / 256);
    EXPECT_EQ(mag.size(0), signal::stft_frame_count(n, cfg));
  }
}

TEST(Stft, ZerosAndImpulse) {
  SpectralConfig rect{256, 64, 256, WindowKind::kRectangular};
  auto zero = signal::stft_magnitude(torch::zeros({1024}), rect);
  EXPECT_EQ(zero.abs().max().item<float>(), 0.0f);
  auto x = torch::zeros({1024});
  x[512] = 1.0;  // centre of frame 8
  auto mag = signal::stft_magnitude(x, rect);
  EXPECT_TRUE(torch::allclose(mag[8], torch::ones({129}), 1e-6, 1e-6));
}

TEST(Stft, SineLandsInExpectedBin) {
  auto w = sine(1000.0, 24000, 24000);
  SpectralConfig cfg{1024, 256, 1024, WindowKind::kHann};
  auto mag = signal::stft_magnitude(w, cfg);
  const auto bin = mag[40].argmax().item<std::int64_t>();
  EXPECT_EQ(bin, std::lround(1000.0 * 1024 / 24000.0));
  const auto oracle = testing::naive_stft_magnitude(as_double(w), 1024, 256, 1024, true)[40];
  EXPECT_EQ(std::max_element(oracle.begin(), oracle.end()) - oracle.begin(), bin);
}

TEST(Stft, RejectsDegenerateInput) {
  SpectralConfig cfg{1024, 256, 1024, WindowKind::kHann};
  EXPECT_THROW(signal::stft_magnitude(torch::zeros({0}), cfg), ArgumentError);
  EXPECT_THROW(signal::stft_magnitude(torch::zeros({100}), cfg), ArgumentError);
  EXPECT_THROW((SpectralConfig{512, 256, 1024, WindowKind::kHann}.validate()), ArgumentError);
  EXPECT_THROW((SpectralConfig{512, 0, 512, WindowKind::kHann}.validate()), ArgumentError);
  EXPECT_THROW((SpectralConfig{512, 600, 512, WindowKind::kHann}.validate()), ArgumentError);
}

TEST(Mel, FilterbankRowsArePositive) {
  for (int n_mels : {10, 40, 80, 160}) {
    auto fb = signal::mel_filterbank(22050, 1024, n_mels, 0.0, 11025.0);
    ASSERT_EQ(fb.size(0), n_mels);
    ASSERT_EQ(fb.size(1), 513);
    EXPECT_GT(fb.sum(1).min().item<float>(), 0.0f) << n_mels;
    EXPECT_GE(fb.min().item<float>(), 0.0f);
  }
}

TEST(Mel, SilenceSitsAtTheLogFloor) {
  signal::MelConfig cfg;
  auto mel = signal::mel_spectrogram(Waveform{std::vector<float>(4096, 0.0f), 22050}, cfg);
  EXPECT_EQ(mel.size(1), 80);
  EXPECT_TRUE(torch::allclose(mel, torch::full_like(mel, std::log(signal::kLogFloor))));
}

TEST(Mel, NoiseMatchesDirectFilterbankProduct) {
  std::mt19937 rng(11);
  std::normal_distribution<float> g(0.0f, 0.2f);
  Waveform w{std::vector<float>(4096), 16000};
  for (auto& s : w.samples) s = g(rng);
  signal::MelConfig cfg{{512, 128, 512, WindowKind::kHann}, 40, 0.0, 8000.0};
  auto mel = signal::mel_spectrogram(w, cfg);
  const auto mag = testing::naive_stft_magnitude(as_double(w), 512, 128, 512, true);
  auto fb = signal::mel_filterbank(16000, 512, 40, 0.0, 8000.0).to(torch::kFloat64);
  auto fa = fb.accessor<double, 2>();
  auto ma = mel.accessor<float, 2>();
  for (std::size_t t = 0; t < mag.size(); t += 5) {
    for (int m = 0; m < 40; ++m) {
      double e = 0.0;
      for (int k = 0; k < 257; ++k) e += fa[m][k] * mag[t][static_cast<std::size_t>(k)];
      EXPECT_NEAR(ma[static_cast<long>(t)][m], std::log(std::max(e, signal::kLogFloor)), 1e-4);
    }
  }
}

TEST(Mel, RejectsBadBand) {
  Waveform w{std::vector<float>(4096, 0.1f), 16000};
  EXPECT_THROW(signal::mel_spectrogram(w, {{512, 128, 512, WindowKind::kHann}, 40, 0.0, 9000.0}),
               ArgumentError);
  EXPECT_THROW(signal::mel_spectrogram(w, {{512, 128, 512, WindowKind::kHann}, 40, 4000.0, 3000.0}),
               ArgumentError);
}

TEST(StftLoss, IdentityIsExactlyZero) {
  std::mt19937 rng(5);
  std::normal_distribution<float> g(0.0f, 0.3f);
  for (int trial = 0; trial < 3; ++trial) {
    Waveform w{std::vector<float>(6000), 22050};
    for (auto& s : w.samples) s = g(rng);
    EXPECT_EQ(signal::multi_resolution_stft_loss(w, w, signal::default_stft_resolutions()), 0.0);
  }
}

TEST(StftLoss, SpectralConvergenceAgainstSilenceIsOne) {
  auto x = signal::to_tensor(sine(440.0, 22050, 8192));
  for (const auto& r : signal::default_stft_resolutions()) {
    auto terms = signal::multi_resolution_stft_terms(x, torch::zeros_like(x), {r});
    EXPECT_NEAR(terms.spectral_convergence.item<double>(), 1.0, 1e-6) << r.fft_size;
  }
}

TEST(StftLoss, PeriodShiftLeavesLossUnchanged) {
  // 441 Hz at 22050 Hz has an exact 50-sample period; 8000 samples hold 160.
  auto w = signal::to_tensor(sine(441.0, 22050, 8000));
  auto w_hat = 0.5 * w + 0.1 * signal::to_tensor(sine(882.0, 22050, 8000));
  auto shifted = torch::roll(w_hat, 50);
  const auto& res = signal::default_stft_resolutions();
  const double a = signal::multi_resolution_stft_loss(w, w_hat, res).item<double>();
  const double b = signal::multi_resolution_stft_loss(w, shifted, res).item<double>();
  EXPECT_NEAR(a, b, 1e-3);
  // The log-magnitude term is symmetric in its arguments.
  const double la = signal::multi_resolution_stft_terms(w, w_hat, res).log_magnitude.item<double>();
  const double lb = signal::multi_resolution_stft_terms(shifted, w, res).log_magnitude.item<double>();
  EXPECT_NEAR(la, lb, 1e-3);
}

TEST(StftLoss, NonNegativeAndValidated) {
  std::mt19937 rng(9);
  std::normal_distribution<float> g(0.0f, 0.3f);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = torch::randn({3000}) * 0.3;
    auto b = torch::randn({3000}) * (0.1 * (trial + 1));
    auto terms = signal::multi_resolution_stft_terms(a, b, signal::default_stft_resolutions());
    EXPECT_GE(terms.spectral_convergence.item<double>(), 0.0);
    EXPECT_GE(terms.log_magnitude.item<double>(), 0.0);
    EXPECT_NEAR(terms.total.item<double>(),
                terms.spectral_convergence.item<double>() + terms.log_magnitude.item<double>(), 1e-6);
  }
  EXPECT_THROW(signal::multi_resolution_stft_loss(torch::zeros({3000}), torch::zeros({2999}),
                                                  signal::default_stft_resolutions()),
               ArgumentError);
  EXPECT_THROW(signal::multi_resolution_stft_loss(torch::zeros({3000}), torch::zeros({3000}), {}),
               ArgumentError);
}

TEST(StftLoss, GradientMatchesFiniteDifferences) {
  torch::manual_seed(2);
  const std::vector<SpectralConfig> res{{64, 16, 64, WindowKind::kHann}, {32, 8, 24, WindowKind::kHann}};
  auto target = (torch::randn({96}, torch::kFloat64) * 0.5);
  auto x0 = (torch::randn({96}, torch::kFloat64) * 0.5);
  auto x = x0.clone().requires_grad_(true);
  auto loss = signal::multi_resolution_stft_loss(target, x, res);
  loss.backward();
  auto analytic = x.grad();
  std::vector<double> xv(x0.data_ptr<double>(), x0.data_ptr<double>() + 96);
  auto numeric = testing::numeric_gradient(
      [&](const std::vector<double>& v) {
        return signal::multi_resolution_stft_loss(target, torch::tensor(v, torch::kFloat64), res)
            .item<double>();
      },
      xv, 1e-6);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 96; ++i) {
    num += std::pow(analytic[static_cast<long>(i)].item<double>() - numeric[i], 2);
    den += std::pow(numeric[i], 2);
  }
  EXPECT_LT(std::sqrt(num / den), 1e-3);
}

Waveform sawtooth(double hz, int rate, std::size_t n) {
  Waveform w{std::vector<float>(n), rate};
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = std::fmod(hz * static_cast<double>(i) / rate, 1.0);
    w.samples[i] = static_cast<float>(0.6 * (2.0 * phase - 1.0));
  }
  return w;
}

TEST(Pitch, SawtoothIsVoicedAtItsFundamental) {
  auto track = signal::extract_pitch(sawtooth(220.0, 22050, 22050), 256);
  ASSERT_EQ(track.frames(), static_cast<std::size_t>(std::ceil(22050.0 / 256.0)));
  EXPECT_EQ(track.voiced_count(), track.frames());
  for (std::size_t t = 0; t < track.frames(); ++t) {
    EXPECT_NEAR(track.log_f0[t], std::log(220.0), 0.02) << t;
  }
}

TEST(Pitch, SilenceIsUnvoiced) {
  auto track = signal::extract_pitch(Waveform{std::vector<float>(8000, 0.0f), 16000}, 256);
  EXPECT_EQ(track.voiced_count(), 0u);
  for (float v : track.log_f0) EXPECT_EQ(v, 0.0f);
}

TEST(Pitch, FrameCountIsCeilOfLengthOverHop) {
  EXPECT_EQ(signal::extract_pitch(sine(200.0, 24000, 24000), 256).frames(), 94u);
  for (std::size_t n : {1u, 255u, 256u, 257u, 5000u}) {
    auto track = signal::extract_pitch(sine(200.0, 22050, n), 256);
    EXPECT_EQ(track.frames(), (n + 255) / 256) << n;
    EXPECT_EQ(track.voiced.size(), track.frames());
  }
}

TEST(Pitch, ShortInputIsAllUnvoiced) {
  auto track = signal::extract_pitch(sine(200.0, 22050, 300), 256);
  EXPECT_EQ(track.voiced_count(), 0u);
}

TEST(Pitch, VoicedValuesStayInSearchBand) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> f(60.0, 700.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double hz = f(rng);
    auto track = signal::extract_pitch(sawtooth(hz, 22050, 11025), 256);
    ASSERT_GT(track.voiced_count(), 0u);
    for (std::size_t t = 0; t < track.frames(); ++t) {
      ASSERT_TRUE(std::isfinite(track.log_f0[t]));
      if (!track.voiced[t]) continue;
      EXPECT_GE(track.log_f0[t], std::log(50.0) - 1e-6);
      EXPECT_LE(track.log_f0[t], std::log(800.0) + 1e-6);
      EXPECT_NEAR(track.log_f0[t], std::log(hz), 0.03) << hz;
    }
  }
}

TEST(Pitch, UnvoicedGapsAreInterpolated) {
  // 150 Hz, then silence, then 300 Hz: gap frames lie between the two log-F0 values.
  auto a = sawtooth(150.0, 16000, 4800), b = sawtooth(300.0, 16000, 4800);
  Waveform w{a.samples, 16000};
  w.samples.insert(w.samples.end(), 3200, 0.0f);
  w.samples.insert(w.samples.end(), b.samples.begin(), b.samples.end());
  auto track = signal::extract_pitch(w, 160);
  bool saw_gap = false;
  for (std::size_t t = 1; t + 1 < track.frames(); ++t) {
    if (track.voiced[t]) continue;
    saw_gap = true;
    EXPECT_GE(track.log_f0[t], std::log(150.0) - 0.05);
    EXPECT_LE(track.log_f0[t], std::log(300.0) + 0.05);
  }
  EXPECT_TRUE(saw_gap);
}

}  // namespace
}  // namespace wavelatent
