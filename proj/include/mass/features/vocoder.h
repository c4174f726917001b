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

#include "mass/features/analysis.h"

namespace mass::features {

// Deterministic source-filter resynthesis. Voiced frames are driven by a pulse
// train at f0, unvoiced frames by white noise; voiced frames mix the two with
// weights sqrt(1 - ap) and sqrt(ap). Both sources are shaped by the envelope
// reconstructed from the MCC. Output has (frames() - 1) * hop + 1
// samples, so analysing it again yields the same frame count.
Waveform Synthesize(const AcousticFeatures& features, const AnalysisConfig& cfg);

}  // namespace mass::features
