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
#include <vector>

namespace mass::features {

inline constexpr int kDefaultSampleRate = 16000;

// Mono audio, samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Throws InputError when the rate is non-positive or a sample is not finite.
  void Validate() const;
};

// Reads a mono PCM16 RIFF/WAVE file. Files at any other rate than
// `expected_rate` are rejected; there is no resampling.
Waveform ReadWav(const std::filesystem::path& path,
                 int expected_rate = kDefaultSampleRate);

// Writes mono PCM16, clipping to [-1, 1]. The write goes through a temporary
// file and a rename.
void WriteWav(const std::filesystem::path& path, const Waveform& wave);

double RmsDbfs(const Waveform& wave);

}  // namespace mass::features
