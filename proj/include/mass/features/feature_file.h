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

#include <cstdint>
#include <filesystem>

#include "mass/features/analysis.h"

namespace mass::features {

inline constexpr char kFeatureMagic[8] = {'M', 'A', 'S', 'S', 'F', 'E', 'A', 'T'};
inline constexpr uint16_t kFeatureFileVersion = 1;

// Little-endian cache layout:
//   "MASSFEAT" | u16 version | u32 T | u32 mcc_dim | u32 ap_bands |
//   u32 sample_rate | u32 frame_shift_us | f32 mcc[T*36] | f32 f0[T] |
//   f32 ap[T*B]
// Voicing is rebuilt from f0 > 0 on load.
void WriteFeatureFile(const std::filesystem::path& path, const AcousticFeatures& feats);
AcousticFeatures ReadFeatureFile(const std::filesystem::path& path);

}  // namespace mass::features
