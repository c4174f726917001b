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

#include "mass/features/analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.h"
#include "mass/features/mel_cepstrum.h"
#include "pitch.h"

namespace mass::features {

void AnalysisConfig::Validate() const {
  if (sample_rate <= 0) throw ParameterError("analysis: sample_rate must be positive");
  if (!(frame_shift > 0.0)) throw ParameterError("analysis: frame_shift must be positive");
  if (hop_samples() < 1) throw ParameterError("analysis: frame_shift below one sample");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    throw ParameterError("analysis: fft_size must be a power of two");
  }
  if (envelope_window() > fft_size) {
    throw ParameterError("analysis: envelope window (4 frame shifts) exceeds fft_size");
  }
  if (mcc_order != kMccDim) {
    throw ParameterError("analysis: mcc_order is fixed at " + std::to_string(kMccDim));
  }
  if (!(std::abs(mel_warp_alpha) < 1.0)) {
    throw ParameterError("analysis: mel_warp_alpha must lie in (-1, 1)");
  }
  if (!(f0_floor > 0.0) || !(f0_floor < f0_ceil)) {
    throw ParameterError("analysis: need 0 < f0_floor < f0_ceil");
  }
  if (f0_ceil >= sample_rate / 2.0) throw ParameterError("analysis: f0_ceil above Nyquist");
  if (!(voicing_threshold > 0.0 && voicing_threshold < 1.0)) {
    throw ParameterError("analysis: voicing_threshold must lie in (0, 1)");
  }
  if (!(envelope_floor > 0.0)) throw ParameterError("analysis: envelope_floor must be positive");
}

int AnalysisConfig::hop_samples() const {
  return static_cast<int>(std::lround(frame_shift * sample_rate));
}

int AnalysisConfig::FrameCount(size_t n_samples) const {
  return static_cast<int>(n_samples / static_cast<size_t>(hop_samples())) + 1;
}

int AcousticFeatures::unvoiced_count() const {
  return static_cast<int>(std::count(voiced.begin(), voiced.end(), false));
}

void AcousticFeatures::Validate() const {
  const auto t = static_cast<size_t>(mcc.rows());
  if (mcc.cols() != kMccDim) throw InputError("features: mcc must have 36 columns");
  if (f0.size() != t || voiced.size() != t || static_cast<size_t>(aperiodicity.rows()) != t) {
    throw InputError("features: frame count mismatch between streams");
  }
  if (!mcc.allFinite() || !aperiodicity.allFinite()) {
    throw InputError("features: non-finite value");
  }
  for (size_t i = 0; i < t; ++i) {
    if (!std::isfinite(f0[i]) || f0[i] < 0.0) throw InputError("features: invalid f0");
    if ((f0[i] > 0.0) != voiced[i]) {
      throw InputError("features: voicing flag disagrees with f0 at frame " + std::to_string(i));
    }
  }
  if ((aperiodicity.array() < 0.0).any() || (aperiodicity.array() > 1.0).any()) {
    throw InputError("features: aperiodicity outside [0, 1]");
  }
  if (!(frame_shift > 0.0) || sample_rate <= 0) throw InputError("features: bad timing fields");
}

namespace {

void CheckInput(const Waveform& wave, const AnalysisConfig& cfg) {
  cfg.Validate();
  wave.Validate();
  if (wave.samples.empty()) throw InputError("analysis: empty waveform");
  if (wave.sample_rate != cfg.sample_rate) {
    throw InputError("analysis: waveform rate " + std::to_string(wave.sample_rate) +
                     " Hz does not match configured " + std::to_string(cfg.sample_rate) + " Hz");
  }
}

}  // namespace

std::vector<PitchFrame> AnalyzePitch(const Waveform& wave, const AnalysisConfig& cfg) {
  const int frames = cfg.FrameCount(wave.samples.size());
  const int hop = cfg.hop_samples();
  const double sr = cfg.sample_rate;
  const int lag_min = std::max(2, static_cast<int>(std::floor(sr / cfg.f0_ceil)));
  const int lag_max = static_cast<int>(std::ceil(sr / cfg.f0_floor));
  const int window = static_cast<int>(std::ceil(2.0 * sr / cfg.f0_floor));
  const auto n = static_cast<long>(wave.samples.size());
  const auto sample = [&](long i) { return (i >= 0 && i < n) ? wave.samples[i] : 0.0; };

  std::vector<double> seg(static_cast<size_t>(window + lag_max + 2));
  std::vector<double> nccf(static_cast<size_t>(lag_max + 2));
  std::vector<PitchFrame> out(static_cast<size_t>(frames));

  for (int t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t) * hop - (window + lag_max) / 2;
    for (size_t i = 0; i < seg.size(); ++i) seg[i] = sample(start + static_cast<long>(i));

    double e0 = 0.0;
    for (int i = 0; i < window; ++i) e0 += seg[i] * seg[i];
    PitchFrame& pf = out[static_cast<size_t>(t)];
    if (e0 < 1e-10 * window) continue;

    // Energy of the lagged window, slid one sample per lag.
    double el = 0.0;
    for (int i = 0; i < window; ++i) el += seg[i + lag_min - 1] * seg[i + lag_min - 1];
    for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      if (lag > lag_min - 1) {
        el += seg[lag + window - 1] * seg[lag + window - 1] - seg[lag - 1] * seg[lag - 1];
      }
      double acc = 0.0;
      for (int i = 0; i < window; ++i) acc += seg[i] * seg[i + lag];
      const double denom = std::sqrt(e0 * std::max(el, 0.0));
      nccf[static_cast<size_t>(lag)] = denom > 1e-20 ? acc / denom : 0.0;
    }

    int best = lag_min;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      if (nccf[lag] > nccf[best]) best = lag;
    }
    const double peak = nccf[best];
    pf.peak = std::max(peak, 0.0);
    if (peak < cfg.voicing_threshold) continue;

    // Earliest local maximum close to the global one avoids period multiples.
    int chosen = best;
    for (int lag = lag_min; lag < best; ++lag) {
      if (nccf[lag] >= 0.85 * peak && nccf[lag] >= nccf[lag - 1] && nccf[lag] >= nccf[lag + 1]) {
        chosen = lag;
        break;
      }
    }
    double lag = chosen;
    const double a = nccf[chosen - 1], b = nccf[chosen], c = nccf[chosen + 1];
    const double curvature = a - 2.0 * b + c;
    if (curvature < 0.0) lag += std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
    pf.f0 = std::clamp(sr / lag, cfg.f0_floor, cfg.f0_ceil);
  }
  return out;
}

F0Track ExtractF0(const Waveform& wave, const AnalysisConfig& cfg) {
  CheckInput(wave, cfg);
  const auto pitch = AnalyzePitch(wave, cfg);
  F0Track track;
  track.f0.reserve(pitch.size());
  track.voiced.reserve(pitch.size());
  for (const auto& p : pitch) {
    track.f0.push_back(p.f0);
    track.voiced.push_back(p.f0 > 0.0);
  }
  return track;
}

FrameMatrix ExtractEnvelope(const Waveform& wave, const AnalysisConfig& cfg) {
  CheckInput(wave, cfg);
  constexpr int kLifterOrder = kMccDim;
  constexpr double kDynamicRange = 1e-5;  // -100 dB below the frame peak
  const int frames = cfg.FrameCount(wave.samples.size());
  const int hop = cfg.hop_samples();
  const int len = cfg.envelope_window();
  const int n_fft = cfg.fft_size;
  const int bins = cfg.spectrum_bins();
  const auto n = static_cast<long>(wave.samples.size());
  const double floor = cfg.envelope_floor;

  std::vector<double> window(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len);
  }

  RealFft fft(n_fft);
  FrameMatrix env(frames, bins);
  std::vector<double> log_mag(static_cast<size_t>(bins));
  for (int t = 0; t < frames; ++t) {
    auto time = fft.time();
    std::fill(time.begin(), time.end(), 0.0);
    const long start = static_cast<long>(t) * hop - len / 2;
    for (int i = 0; i < len; ++i) {
      const long j = start + i;
      if (j >= 0 && j < n) time[i] = wave.samples[j] * window[i];
    }
    fft.Forward();
    auto freq = fft.freq();
    double peak = 0.0;
    for (int k = 0; k < bins; ++k) peak = std::max(peak, std::abs(freq[k]));
    if (peak <= floor) {
      env.row(t).setConstant(floor);
      continue;
    }
    // Deep spectral nulls would dominate the smoothed log spectrum; limit the
    // per-frame dynamic range before liftering.
    const double frame_floor = std::max(floor, kDynamicRange * peak);
    for (int k = 0; k < bins; ++k) {
      log_mag[k] = std::log(std::max(std::abs(freq[k]), frame_floor));
    }
    // Cepstral smoothing: keep quefrencies |n| < kLifterOrder.
    for (int k = 0; k < bins; ++k) freq[k] = log_mag[k];
    fft.Inverse();
    for (int q = kLifterOrder; q <= n_fft - kLifterOrder; ++q) time[q] = 0.0;
    fft.Forward();
    for (int k = 0; k < bins; ++k) env(t, k) = std::max(floor, std::exp(freq[k].real()));
  }
  return env;
}

AcousticFeatures Analyze(const Waveform& wave, const AnalysisConfig& cfg) {
  CheckInput(wave, cfg);
  const auto pitch = AnalyzePitch(wave, cfg);
  const FrameMatrix env = ExtractEnvelope(wave, cfg);

  AcousticFeatures feats;
  feats.mcc = MelCepstrum(cfg).FromEnvelope(env);
  const auto frames = pitch.size();
  feats.f0.resize(frames);
  feats.voiced.resize(frames);
  feats.aperiodicity.resize(static_cast<Eigen::Index>(frames), 1);
  for (size_t t = 0; t < frames; ++t) {
    feats.f0[t] = pitch[t].f0;
    feats.voiced[t] = pitch[t].f0 > 0.0;
    feats.aperiodicity(static_cast<Eigen::Index>(t), 0) = std::clamp(1.0 - pitch[t].peak, 0.0, 1.0);
  }
  feats.frame_shift = cfg.frame_shift;
  feats.sample_rate = cfg.sample_rate;
  return feats;
}

}  // namespace mass::features
