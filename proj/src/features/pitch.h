// Copyright 2026 The MASS Authors
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

#include <vector>

#include "mass/features/analysis.h"

namespace mass::features {

struct PitchFrame {
  double f0 = 0.0;    // 0 when unvoiced
  double peak = 0.0;  // normalised cross-correlation peak, clamped at 0
};

// Normalised cross-correlation pitch tracker over [f0_floor, f0_ceil].
std::vector<PitchFrame> AnalyzePitch(const Waveform& wave, const AnalysisConfig& cfg);

}  // namespace mass::features
