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

#include <filesystem>

#include "mass/features/analysis.h"

namespace mass::eval {

inline constexpr int kMelBands = 40;

struct SpectralSummary {
  FrameMatrix envelope;  // T x (fft_size/2 + 1) magnitude
  FrameMatrix mel;       // T x kMelBands, dB energy
};

// Envelope reconstructed from the MCC and its triangular mel-band energies.
SpectralSummary SummarizeSpectra(const features::AcousticFeatures& feats,
                                 const features::AnalysisConfig& cfg);

// CSV with a header row, one line per frame: env_0..env_{N-1}, mel_0..mel_39.
// Values are written with 17 significant digits so loading is exact.
void ExportSpectralSummaries(const features::AcousticFeatures& feats,
                             const features::AnalysisConfig& cfg,
                             const std::filesystem::path& path);
SpectralSummary LoadSpectralSummaries(const std::filesystem::path& path);

// kMelBands x bins triangular filters on the HTK mel scale from 0 Hz to
// Nyquist.
Eigen::MatrixXd MelFilterbank(const features::AnalysisConfig& cfg, int bands = kMelBands);

}  // namespace mass::eval
