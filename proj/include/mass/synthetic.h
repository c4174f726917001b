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

#include <array>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mass/features/waveform.h"

// Synthetic speech-like signals with known generating parameters, used by the
// tests, the acceptance suite and the toy-corpus recipe.
namespace mass::synthetic {

using features::Waveform;

Waveform Sine(double freq_hz, double seconds, double amplitude = 0.5,
              int sample_rate = features::kDefaultSampleRate);
Waveform SumOfSines(const std::vector<double>& freqs_hz, double seconds, double amplitude = 0.4,
                    int sample_rate = features::kDefaultSampleRate);
Waveform WhiteNoise(double seconds, double amplitude, unsigned seed,
                    int sample_rate = features::kDefaultSampleRate);

// Formant frequencies (Hz) of one vowel target.
using Formants = std::array<double, 4>;

// Five cardinal-vowel formant targets.
const std::vector<Formants>& VowelTable();

// Glottal-like harmonic source (1/h amplitudes) through a cascade of formant
// resonators, at constant f0 and formants.
Waveform SustainedVowel(double f0_hz, const Formants& formants, double seconds,
                        int sample_rate = features::kDefaultSampleRate);

// Speaking style: how an attribute transforms the shared content.
struct VoiceStyle {
  double base_f0 = 120.0;
  double formant_scale = 1.0;
};

// Linguistic content of one utterance: vowel sequence, durations and a
// pitch offset. Rendering the same content with two styles gives a parallel
// pair.
struct UtteranceContent {
  std::vector<int> vowels;
  std::vector<double> durations;  // seconds
  double pitch_offset_semitones = 0.0;
  double amplitude = 0.5;
  unsigned noise_seed = 0;
};

UtteranceContent RandomContent(std::mt19937_64& rng);
Waveform RenderUtterance(const UtteranceContent& content, const VoiceStyle& style,
                         int sample_rate = features::kDefaultSampleRate);

struct ToyCorpusSpec {
  std::vector<std::string> attribute_names = {"natural", "bright"};
  std::vector<VoiceStyle> styles = {{120.0, 1.0}, {180.0, 1.2}};
  int train_per_attribute = 40;
  int test_pairs = 10;
  unsigned seed = 0;
};

// Writes <dir>/train/<attr>/utt_NNN.wav with independent content per
// attribute (non-parallel) and <dir>/test/<attr>/pair_NNN.wav where pair i
// shares content across attributes.
void WriteToyCorpus(const std::filesystem::path& dir, const ToyCorpusSpec& spec);

}  // namespace mass::synthetic
