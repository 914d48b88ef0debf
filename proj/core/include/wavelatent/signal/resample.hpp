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

#include "wavelatent/signal/waveform.hpp"

namespace wavelatent::signal {

/// Band-limited rational-ratio resampling with a Kaiser-windowed sinc kernel.
/// Output length is ceil(n * target_rate / sample_rate); a rate equal to the
/// input rate returns the input unchanged.
Waveform resample(const Waveform& w, int target_rate);

}  // namespace wavelatent::signal
