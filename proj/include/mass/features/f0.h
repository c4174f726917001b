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

#include <span>
#include <vector>

#include "mass/features/analysis.h"

namespace mass::features {

// Spread used when every voiced frame has the same log-F0.
inline constexpr double kMinLogF0Std = 1e-3;

struct F0Statistics {
  double mean_log_f0 = 0.0;
  double std_log_f0 = 0.0;
  long n_voiced_frames = 0;
};

// Mean and (population) standard deviation of ln f0 over voiced frames.
// Throws InsufficientDataError with fewer than two voiced frames.
F0Statistics ComputeF0Statistics(std::span<const AcousticFeatures> utterances);
F0Statistics ComputeF0Statistics(std::span<const double> f0);

// Log-Gaussian normalised transform:
//   ln f' = tgt.mean + (tgt.std / src.std) * (ln f - src.mean)
// Unvoiced frames (0) stay 0.
std::vector<double> ConvertF0(std::span<const double> f0, const F0Statistics& src,
                              const F0Statistics& tgt);

}  // namespace mass::features
