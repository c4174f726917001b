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

#include "mass/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mass/common.h"

namespace mass::synthetic {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::array<double, 4> kBandwidths = {80.0, 100.0, 140.0, 180.0};

// Second-order resonator with unity gain at DC.
class Resonator {
 public:
  void Set(double freq, double bandwidth, double sr) {
    const double r = std::exp(-std::numbers::pi * bandwidth / sr);
    a1_ = 2.0 * r * std::cos(kTwoPi * freq / sr);
    a2_ = -r * r;
    gain_ = 1.0 - a1_ - a2_;
  }
  double Process(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

double HarmonicSource(double phase, double f0, double sr) {
  double acc = 0.0;
  const int n_harm = static_cast<int>((0.45 * sr) / f0);
  for (int h = 1; h <= n_harm; ++h) acc += std::sin(kTwoPi * h * phase) / h;
  return acc;
}

void NormalizePeak(Waveform& w, double peak) {
  double m = 0.0;
  for (double s : w.samples) m = std::max(m, std::abs(s));
  if (m > 0.0) {
    for (double& s : w.samples) s *= peak / m;
  }
}

}  // namespace

Waveform Sine(double freq_hz, double seconds, double amplitude, int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(static_cast<size_t>(std::lround(seconds * sample_rate)));
  for (size_t i = 0; i < w.samples.size(); ++i) {
    w.samples[i] = amplitude * std::sin(kTwoPi * freq_hz * i / sample_rate);
  }
  return w;
}

Waveform SumOfSines(const std::vector<double>& freqs_hz, double seconds, double amplitude,
                    int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(static_cast<size_t>(std::lround(seconds * sample_rate)), 0.0);
  for (double f : freqs_hz) {
    for (size_t i = 0; i < w.samples.size(); ++i) {
      w.samples[i] += amplitude * std::sin(kTwoPi * f * i / sample_rate);
    }
  }
  return w;
}

Waveform WhiteNoise(double seconds, double amplitude, unsigned seed, int sample_rate) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(static_cast<size_t>(std::lround(seconds * sample_rate)));
  for (double& s : w.samples) s = dist(rng);
  return w;
}

const std::vector<Formants>& VowelTable() {
  static const std::vector<Formants> table = {
      {730.0, 1090.0, 2440.0, 3400.0},  // a
      {270.0, 2290.0, 3010.0, 3600.0},  // i
      {300.0, 870.0, 2240.0, 3300.0},   // u
      {530.0, 1840.0, 2480.0, 3500.0},  // e
      {570.0, 840.0, 2410.0, 3400.0},   // o
  };
  return table;
}

Waveform SustainedVowel(double f0_hz, const Formants& formants, double seconds, int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  const auto n = static_cast<size_t>(std::lround(seconds * sample_rate));
  w.samples.resize(n);
  std::array<Resonator, 4> res;
  for (size_t k = 0; k < res.size(); ++k) res[k].Set(formants[k], kBandwidths[k], sample_rate);
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double x = HarmonicSource(phase, f0_hz, sample_rate);
    phase += f0_hz / sample_rate;
    phase -= std::floor(phase);
    for (auto& r : res) x = r.Process(x);
    w.samples[i] = x;
  }
  NormalizePeak(w, 0.5);
  return w;
}

UtteranceContent RandomContent(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(3, 5);
  std::uniform_int_distribution<int> vowel(0, static_cast<int>(VowelTable().size()) - 1);
  std::uniform_real_distribution<double> dur(0.12, 0.25);
  std::uniform_real_distribution<double> offset(-2.0, 2.0);
  std::uniform_real_distribution<double> amp(0.3, 0.6);
  UtteranceContent c;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    int v = vowel(rng);
    if (!c.vowels.empty() && v == c.vowels.back()) v = (v + 1) % static_cast<int>(VowelTable().size());
    c.vowels.push_back(v);
    c.durations.push_back(dur(rng));
  }
  c.pitch_offset_semitones = offset(rng);
  c.amplitude = amp(rng);
  c.noise_seed = static_cast<unsigned>(rng());
  return c;
}

Waveform RenderUtterance(const UtteranceContent& content, const VoiceStyle& style, int sample_rate) {
  if (content.vowels.empty() || content.vowels.size() != content.durations.size()) {
    throw ParameterError("synthetic: content needs matching vowel and duration lists");
  }
  const double sr = sample_rate;
  const double lead = 0.05;  // near-silent margin on both ends
  double voiced_len = 0.0;
  for (double d : content.durations) voiced_len += d;
  const auto n_voiced = static_cast<size_t>(std::lround(voiced_len * sr));
  const auto n_lead = static_cast<size_t>(std::lround(lead * sr));

  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(n_voiced + 2 * n_lead, 0.0);

  std::array<Resonator, 4> res;
  Formants current = VowelTable()[static_cast<size_t>(content.vowels.front())];
  const double smooth = std::exp(-1.0 / (0.02 * sr));  // 20 ms formant glide
  const double base = style.base_f0 * std::pow(2.0, content.pitch_offset_semitones / 12.0);
  double phase = 0.0;
  size_t seg = 0;
  double seg_end = content.durations[0];
  const double ramp = 0.02 * sr;
  for (size_t i = 0; i < n_voiced; ++i) {
    const double t = i / sr;
    while (t >= seg_end && seg + 1 < content.vowels.size()) {
      ++seg;
      seg_end += content.durations[seg];
    }
    const Formants& target = VowelTable()[static_cast<size_t>(content.vowels[seg])];
    for (size_t k = 0; k < 4; ++k) {
      current[k] = smooth * current[k] + (1.0 - smooth) * target[k];
      res[k].Set(std::min(current[k] * style.formant_scale, 0.45 * sr), kBandwidths[k], sr);
    }
    // Gentle declination plus a slow 5 Hz vibrato.
    const double f0 = base * (1.0 + 0.08 * (0.5 - t / voiced_len)) *
                      (1.0 + 0.01 * std::sin(kTwoPi * 5.0 * t));
    double x = HarmonicSource(phase, f0, sr);
    phase += f0 / sr;
    phase -= std::floor(phase);
    for (auto& r : res) x = r.Process(x);
    const double edge = std::min({1.0, i / ramp, (n_voiced - i) / ramp});
    w.samples[n_lead + i] = x * edge;
  }
  NormalizePeak(w, content.amplitude);

  std::mt19937 rng(content.noise_seed);
  std::uniform_real_distribution<double> dist(-1e-4, 1e-4);
  for (double& s : w.samples) s += dist(rng);
  return w;
}

void WriteToyCorpus(const std::filesystem::path& dir, const ToyCorpusSpec& spec) {
  if (spec.attribute_names.size() != spec.styles.size() || spec.styles.empty()) {
    throw ParameterError("toy corpus: one style per attribute required");
  }
  std::mt19937_64 rng(spec.seed);
  char name[32];
  for (size_t a = 0; a < spec.styles.size(); ++a) {
    const auto sub = dir / "train" / spec.attribute_names[a];
    std::filesystem::create_directories(sub);
    for (int i = 0; i < spec.train_per_attribute; ++i) {
      std::snprintf(name, sizeof(name), "utt_%03d.wav", i);
      features::WriteWav(sub / name, RenderUtterance(RandomContent(rng), spec.styles[a]));
    }
  }
  for (const auto& attr : spec.attribute_names) {
    std::filesystem::create_directories(dir / "test" / attr);
  }
  for (int i = 0; i < spec.test_pairs; ++i) {
    const UtteranceContent content = RandomContent(rng);
    std::snprintf(name, sizeof(name), "pair_%03d.wav", i);
    for (size_t a = 0; a < spec.styles.size(); ++a) {
      features::WriteWav(dir / "test" / spec.attribute_names[a] / name,
                         RenderUtterance(content, spec.styles[a]));
    }
  }
}

}  // namespace mass::synthetic
