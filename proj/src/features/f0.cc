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

#include "mass/features/f0.h"

#include <cmath>
#include <string>

namespace mass::features {

F0Statistics ComputeF0Statistics(std::span<const double> f0) {
  // Two passes keep the variance accurate for tightly clustered log-F0.
  long count = 0;
  double sum = 0.0;
  for (double f : f0) {
    if (f > 0.0) {
      sum += std::log(f);
      ++count;
    }
  }
  if (count < 2) {
    throw InsufficientDataError("f0 statistics need at least 2 voiced frames, got " +
                                std::to_string(count));
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (double f : f0) {
    if (f > 0.0) {
      const double d = std::log(f) - mean;
      ss += d * d;
    }
  }
  F0Statistics stats;
  stats.mean_log_f0 = mean;
  stats.std_log_f0 = std::max(std::sqrt(ss / count), kMinLogF0Std);
  stats.n_voiced_frames = count;
  return stats;
}

F0Statistics ComputeF0Statistics(std::span<const AcousticFeatures> utterances) {
  std::vector<double> all;
  for (const auto& u : utterances) all.insert(all.end(), u.f0.begin(), u.f0.end());
  return ComputeF0Statistics(std::span<const double>(all));
}

std::vector<double> ConvertF0(std::span<const double> f0, const F0Statistics& src,
                              const F0Statistics& tgt) {
  if (!(src.std_log_f0 > 0.0)) throw ParameterError("convert_f0: source std_log_f0 must be > 0");
  if (src.mean_log_f0 == tgt.mean_log_f0 && src.std_log_f0 == tgt.std_log_f0) {
    return {f0.begin(), f0.end()};
  }
  const double ratio = tgt.std_log_f0 / src.std_log_f0;
  std::vector<double> out(f0.size(), 0.0);
  for (size_t i = 0; i < f0.size(); ++i) {
    if (f0[i] > 0.0) {
      out[i] = std::exp(tgt.mean_log_f0 + ratio * (std::log(f0[i]) - src.mean_log_f0));
    }
  }
  return out;
}

}  // namespace mass::features
