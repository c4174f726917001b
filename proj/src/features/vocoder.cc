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

#include "mass/features/vocoder.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fft.h"
#include "mass/features/mel_cepstrum.h"

namespace mass::features {
namespace {

// Adds the circular buffer `h`, whose index 0 sits at out[origin], into out.
void AddCentred(std::span<const double> h, long origin, std::vector<double>& out) {
  const long n = static_cast<long>(h.size());
  const long len = static_cast<long>(out.size());
  for (long m = -n / 2; m < n / 2; ++m) {
    const long j = origin + m;
    if (j >= 0 && j < len) out[j] += h[(m + n) % n];
  }
}

}  // namespace

Waveform Synthesize(const AcousticFeatures& features, const AnalysisConfig& cfg) {
  cfg.Validate();
  features.Validate();
  if (features.sample_rate != cfg.sample_rate) {
    throw InputError("synthesize: feature sample rate does not match configuration");
  }
  const int frames = features.frames();
  const int hop = cfg.hop_samples();
  const int n_fft = cfg.fft_size;
  const int bins = cfg.spectrum_bins();
  const double sr = cfg.sample_rate;
  // The last frame centre is the last sample, so re-analysis gives T frames.
  const long length = static_cast<long>(frames - 1) * hop + 1;

  const FrameMatrix env = MelCepstrum(cfg).ToEnvelope(features.mcc);
  if (!env.allFinite()) throw InputError("synthesize: envelope overflow from mcc");

  // Gains that make the analysis window see the envelope again.
  const int win_len = cfg.envelope_window();
  double win_sum = 0.0, win_sq = 0.0;
  for (int i = 0; i < win_len; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win_len);
    win_sum += w;
    win_sq += w * w;
  }
  const auto ap = [&](int t) {
    return features.aperiodicity.cols() > 0 ? features.aperiodicity.row(t).mean() : 0.0;
  };

  std::vector<double> out(static_cast<size_t>(length), 0.0);
  RealFft fft(n_fft);

  // Voiced part: one zero-phase response per pulse, placed at the fractional
  // pulse time through a linear phase term.
  const auto frame_of = [&](long n) {
    return std::clamp(static_cast<int>(std::lround(static_cast<double>(n) / hop)), 0, frames - 1);
  };
  const auto f0_at = [&](long n) {
    const double u = static_cast<double>(n) / hop;
    const int t0 = std::clamp(static_cast<int>(std::floor(u)), 0, frames - 1);
    const int t1 = std::min(t0 + 1, frames - 1);
    const double a = features.f0[t0], b = features.f0[t1];
    if (a > 0.0 && b > 0.0) {
      const double frac = std::clamp(u - t0, 0.0, 1.0);
      return a + (b - a) * frac;
    }
    return features.f0[frame_of(n)];
  };

  double phase = 0.0;
  bool in_voiced = false;
  for (long n = 0; n < length; ++n) {
    const int t = frame_of(n);
    if (!features.voiced[t]) {
      in_voiced = false;
      continue;
    }
    const double f = f0_at(n);
    const double step = f / sr;
    if (!in_voiced) {
      phase = 1.0 - step;
      in_voiced = true;
    }
    phase += step;
    if (phase < 1.0) continue;
    phase -= 1.0;
    const double pos = static_cast<double>(n) - phase / step;
    const double base = std::floor(pos);
    const double frac = pos - base;
    const double gain = (sr / f) / win_sum * std::sqrt(std::max(0.0, 1.0 - ap(t)));
    auto freq = fft.freq();
    for (int k = 0; k < bins; ++k) {
      const double angle = -2.0 * std::numbers::pi * k * frac / n_fft;
      freq[k] = std::polar(gain * env(t, k), angle);
    }
    fft.Inverse();
    AddCentred(fft.time(), static_cast<long>(base), out);
  }

  // Noise part: windowed white-noise segments shaped per frame and
  // overlap-added; periodic Hann windows at half overlap sum to one.
  std::mt19937 rng(cfg.noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(static_cast<size_t>(length + 2 * hop));
  for (double& v : noise) v = normal(rng);
  const int seg_len = 2 * hop;
  for (int t = 0; t < frames; ++t) {
    const double mix = features.voiced[t] ? std::sqrt(ap(t)) : 1.0;
    if (mix <= 0.0) continue;
    auto time = fft.time();
    std::fill(time.begin(), time.end(), 0.0);
    for (int i = 0; i < seg_len; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / seg_len);
      const int m = i - hop;  // offset from the frame centre
      time[(m + n_fft) % n_fft] = w * noise[static_cast<size_t>(static_cast<long>(t) * hop + i)];
    }
    fft.Forward();
    auto freq = fft.freq();
    const double gain = mix / std::sqrt(win_sq);
    for (int k = 0; k < bins; ++k) freq[k] *= gain * env(t, k);
    fft.Inverse();
    AddCentred(fft.time(), static_cast<long>(t) * hop, out);
  }

  Waveform wave;
  wave.sample_rate = cfg.sample_rate;
  wave.samples = std::move(out);
  return wave;
}

}  // namespace mass::features
