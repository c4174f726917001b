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

#include "mass/common.h"
#include "mass/features/waveform.h"

namespace mass::features {

struct AnalysisConfig {
  int sample_rate = kDefaultSampleRate;
  double frame_shift = 0.005;  // seconds
  int fft_size = 1024;
  int mcc_order = kMccDim;
  double mel_warp_alpha = 0.42;
  double f0_floor = 70.0;
  double f0_ceil = 500.0;
  double voicing_threshold = 0.45;
  double envelope_floor = 1e-10;
  unsigned noise_seed = 1;  // excitation noise used by Synthesize

  // Throws ParameterError on an invalid combination.
  void Validate() const;

  int hop_samples() const;
  // Analysis window for the spectral envelope: four frame shifts.
  int envelope_window() const { return 4 * hop_samples(); }
  int spectrum_bins() const { return fft_size / 2 + 1; }
  // Number of frames for a signal of n samples; frame t is centred on t * hop.
  int FrameCount(size_t n_samples) const;
};

struct F0Track {
  std::vector<double> f0;  // Hz, 0 for unvoiced
  std::vector<bool> voiced;
};

struct AcousticFeatures {
  FrameMatrix mcc;           // T x 36, column 0 is the log-gain term
  std::vector<double> f0;    // Hz, 0 denotes unvoiced
  std::vector<bool> voiced;  // voiced[t] == (f0[t] > 0)
  FrameMatrix aperiodicity;  // T x B in [0, 1]
  double frame_shift = 0.005;
  int sample_rate = kDefaultSampleRate;

  int frames() const { return static_cast<int>(mcc.rows()); }
  int unvoiced_count() const;
  // Throws InputError when the coupling or finiteness invariants fail.
  void Validate() const;
};

F0Track ExtractF0(const Waveform& wave, const AnalysisConfig& cfg);

// T x (fft_size/2 + 1) magnitude envelope, floored at cfg.envelope_floor.
FrameMatrix ExtractEnvelope(const Waveform& wave, const AnalysisConfig& cfg);

AcousticFeatures Analyze(const Waveform& wave, const AnalysisConfig& cfg);

}  // namespace mass::features
