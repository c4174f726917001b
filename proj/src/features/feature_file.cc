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

#include "mass/features/feature_file.h"

#include <cmath>
#include <string_view>

#include "mass/binary_io.h"

namespace mass::features {

void WriteFeatureFile(const std::filesystem::path& path, const AcousticFeatures& feats) {
  feats.Validate();
  const auto frames = static_cast<uint32_t>(feats.frames());
  const auto bands = static_cast<uint32_t>(feats.aperiodicity.cols());
  std::string out(kFeatureMagic, sizeof(kFeatureMagic));
  AppendLe<uint16_t>(out, kFeatureFileVersion);
  AppendLe<uint32_t>(out, frames);
  AppendLe<uint32_t>(out, kMccDim);
  AppendLe<uint32_t>(out, bands);
  AppendLe<uint32_t>(out, static_cast<uint32_t>(feats.sample_rate));
  AppendLe<uint32_t>(out, static_cast<uint32_t>(std::lround(feats.frame_shift * 1e6)));
  for (Eigen::Index t = 0; t < feats.mcc.rows(); ++t) {
    for (Eigen::Index d = 0; d < feats.mcc.cols(); ++d) {
      AppendLe<float>(out, static_cast<float>(feats.mcc(t, d)));
    }
  }
  for (double f : feats.f0) AppendLe<float>(out, static_cast<float>(f));
  for (Eigen::Index t = 0; t < feats.aperiodicity.rows(); ++t) {
    for (Eigen::Index b = 0; b < feats.aperiodicity.cols(); ++b) {
      AppendLe<float>(out, static_cast<float>(feats.aperiodicity(t, b)));
    }
  }
  WriteFileAtomic(path.string(), out);
}

AcousticFeatures ReadFeatureFile(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path.string());
  ByteReader in(bytes, path.string());
  if (in.ReadBytes(sizeof(kFeatureMagic)) != std::string_view(kFeatureMagic, sizeof(kFeatureMagic))) {
    throw FormatError(path.string() + ": bad magic, not a MASSFEAT file");
  }
  const auto version = in.Read<uint16_t>();
  if (version != kFeatureFileVersion) {
    throw VersionError(path.string() + ": feature file version " + std::to_string(version) +
                       ", expected " + std::to_string(kFeatureFileVersion));
  }
  const auto frames = in.Read<uint32_t>();
  const auto dim = in.Read<uint32_t>();
  const auto bands = in.Read<uint32_t>();
  const auto rate = in.Read<uint32_t>();
  const auto shift_us = in.Read<uint32_t>();
  if (dim != kMccDim) throw FormatError(path.string() + ": mcc_dim must be 36");
  const size_t expected = 4ull * (size_t{frames} * dim + frames + size_t{frames} * bands);
  if (in.remaining() != expected) throw FormatError(path.string() + ": payload size mismatch");

  AcousticFeatures feats;
  feats.sample_rate = static_cast<int>(rate);
  feats.frame_shift = shift_us * 1e-6;
  feats.mcc.resize(frames, dim);
  for (uint32_t t = 0; t < frames; ++t) {
    for (uint32_t d = 0; d < dim; ++d) feats.mcc(t, d) = in.Read<float>();
  }
  feats.f0.resize(frames);
  feats.voiced.resize(frames);
  for (uint32_t t = 0; t < frames; ++t) {
    feats.f0[t] = in.Read<float>();
    feats.voiced[t] = feats.f0[t] > 0.0;
  }
  feats.aperiodicity.resize(frames, bands);
  for (uint32_t t = 0; t < frames; ++t) {
    for (uint32_t b = 0; b < bands; ++b) feats.aperiodicity(t, b) = in.Read<float>();
  }
  feats.Validate();
  return feats;
}

}  // namespace mass::features
