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

#include "wavelatent/pipeline/latent_cache.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {
namespace {

constexpr char kMagic[4] = {'W', 'L', 'A', 'T'};
constexpr std::uint32_t kEntryVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

void put_floats(std::string& out, const torch::Tensor& t) {
  auto c = t.to(torch::kFloat32).contiguous();
  const float* p = c.data_ptr<float>();
  for (std::int64_t i = 0; i < c.numel(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &p[i], sizeof bits);
    put_u32(out, bits);
  }
}

torch::Tensor get_floats(const std::string& in, std::size_t at, std::int64_t rows, std::int64_t cols) {
  auto t = torch::empty({rows, cols}, torch::kFloat32);
  float* p = t.data_ptr<float>();
  for (std::int64_t i = 0; i < rows * cols; ++i) {
    const std::uint32_t bits = get_u32(in, at + 4 * static_cast<std::size_t>(i));
    std::memcpy(&p[i], &bits, sizeof bits);
  }
  return t;
}

}  // namespace

void write_latent_entry(const std::filesystem::path& path, const LatentEntry& entry) {
  if (entry.mu.dim() != 2 || !entry.mu.sizes().equals(entry.log_sigma.sizes())) {
    throw ArgumentError("latent entry tensors must both be [C, frames]");
  }
  std::string bytes(kMagic, 4);
  put_u32(bytes, kEntryVersion);
  put_u32(bytes, static_cast<std::uint32_t>(entry.mu.size(0)));
  put_u32(bytes, static_cast<std::uint32_t>(entry.mu.size(1)));
  put_floats(bytes, entry.mu);
  put_floats(bytes, entry.log_sigma);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw IoError("cannot write latent entry: " + path.string());
  }
}

LatentEntry read_latent_entry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read latent entry: " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(path.string() + " is not a latent entry");
  }
  if (get_u32(bytes, 4) != kEntryVersion) {
    throw VersionError(path.string() + " has an unsupported latent entry version");
  }
  const std::int64_t channels = get_u32(bytes, 8);
  const std::int64_t frames = get_u32(bytes, 12);
  const std::size_t block = 4 * static_cast<std::size_t>(channels * frames);
  if (bytes.size() != 16 + 2 * block) throw FormatError(path.string() + " is truncated");
  LatentEntry entry;
  entry.id = path.stem().string();
  entry.mu = get_floats(bytes, 16, channels, frames);
  entry.log_sigma = get_floats(bytes, 16 + block, channels, frames);
  return entry;
}

std::size_t extract_latent_stats(wavegan::WaveGan& model, const Dataset& dataset,
                                 const std::filesystem::path& dir) {
  torch::NoGradGuard no_grad;
  model.train(false);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.jsonl", std::ios::trunc);
  if (!index) throw IoError("cannot write latent index under " + dir.string());
  for (const auto& r : dataset.utterances()) {
    auto audio = signal::to_tensor(dataset.load_audio(r));
    auto post = model.encode(audio);
    LatentEntry entry{r.id, post.mu[0], post.log_sigma[0], r.tokens};
    const auto file = r.id + ".lat";
    write_latent_entry(dir / file, entry);
    nlohmann::json row{{"id", r.id},
                       {"file", file},
                       {"frames", entry.frames()},
                       {"channels", entry.mu.size(0)},
                       {"tokens", r.tokens}};
    index << row.dump() << '\n';
  }
  return dataset.size();
}

std::vector<LatentEntry> load_latent_cache(const std::filesystem::path& dir) {
  std::ifstream index(dir / "index.jsonl");
  if (!index) throw IoError("no latent cache at " + dir.string());
  std::vector<LatentEntry> entries;
  for (std::string line; std::getline(index, line);) {
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
      auto entry = read_latent_entry(dir / row.at("file").get<std::string>());
      entry.id = row.at("id").get<std::string>();
      entry.tokens = row.at("tokens").get<std::vector<std::int64_t>>();
      if (entry.frames() != row.at("frames").get<std::int64_t>()) {
        throw FormatError("frame count of '" + entry.id + "' disagrees with the index");
      }
      entries.push_back(std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("malformed latent index " + (dir / "index.jsonl").string() + ": " + e.what());
    }
  }
  return entries;
}

std::vector<flow::AcousticExample> to_acoustic_examples(const std::vector<LatentEntry>& entries) {
  std::vector<flow::AcousticExample> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.mu, e.log_sigma, e.tokens});
  return out;
}

}  // namespace wavelatent::pipeline
