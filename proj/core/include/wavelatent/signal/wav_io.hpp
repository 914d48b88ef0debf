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

#include <filesystem>

#include "wavelatent/signal/waveform.hpp"

namespace wavelatent::signal {

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float samples.
/// Multi-channel input is averaged to mono; integer PCM is scaled by 1/32768.
/// Throws IoError when the file cannot be read and FormatError for any
/// other encoding.
Waveform load_waveform(const std::filesystem::path& path);

/// Writes a mono WAV file. PCM16 output is clipped to [-1, 1] and rounded.
void save_waveform(const std::filesystem::path& path, const Waveform& w,
                   WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace wavelatent::signal
