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

#include "doctest.h"
#include "mass/features/analysis.h"
#include "mass/synthetic.h"
#include "test_util.h"

namespace mf = mass::features;
namespace ms = mass::synthetic;
using mass::testing::Median;
using mass::testing::VoicedOnly;

namespace {

int ArgMax(const mass::FrameMatrix& m, Eigen::Index row) {
  Eigen::Index idx = 0;
  m.row(row).maxCoeff(&idx);
  return static_cast<int>(idx);
}

}  // namespace

TEST_CASE("extract_f0 tracks a 220 Hz sine") {
  const mf::AnalysisConfig cfg;
  const auto track = mf::ExtractF0(ms::Sine(220.0, 1.0), cfg);
  CHECK(track.f0.size() == static_cast<size_t>(cfg.FrameCount(16000)));
  const auto voiced = VoicedOnly(track.f0);
  CHECK(voiced.size() >= 0.9 * track.f0.size());
  CHECK(Median(voiced) == doctest::Approx(220.0).epsilon(0.05));
  for (size_t t = 0; t < track.f0.size(); ++t) {
    CHECK(track.voiced[t] == (track.f0[t] > 0.0));
    if (track.voiced[t]) {
      CHECK(track.f0[t] >= cfg.f0_floor);
      CHECK(track.f0[t] <= cfg.f0_ceil);
    }
  }
}

TEST_CASE("extract_f0 on silence is all unvoiced") {
  mf::Waveform silence;
  silence.samples.assign(16000, 0.0);
  const auto track = mf::ExtractF0(silence, mf::AnalysisConfig{});
  for (size_t t = 0; t < track.f0.size(); ++t) {
    CHECK(track.f0[t] == 0.0);
    CHECK_FALSE(track.voiced[t]);
  }
}

TEST_CASE("extract_f0 leaves white noise mostly unvoiced") {
  const auto track = mf::ExtractF0(ms::WhiteNoise(1.0, 0.5, 7), mf::AnalysisConfig{});
  const auto voiced = VoicedOnly(track.f0).size();
  CHECK(static_cast<double>(track.f0.size() - voiced) >= 0.8 * track.f0.size());
}

TEST_CASE("extract_f0 follows the vowel source pitch") {
  const auto vowel = ms::SustainedVowel(150.0, ms::VowelTable()[0], 1.0);
  const auto track = mf::ExtractF0(vowel, mf::AnalysisConfig{});
  CHECK(Median(VoicedOnly(track.f0)) == doctest::Approx(150.0).epsilon(0.05));
}

TEST_CASE("empty waveform is an input error") {
  const mf::Waveform empty;
  const mf::AnalysisConfig cfg;
  CHECK_THROWS_AS(mf::ExtractF0(empty, cfg), mass::InputError);
  CHECK_THROWS_AS(mf::ExtractEnvelope(empty, cfg), mass::InputError);
  CHECK_THROWS_AS(mf::Analyze(empty, cfg), mass::InputError);
}

TEST_CASE("invalid configurations are rejected") {
  mf::AnalysisConfig cfg;
  cfg.fft_size = 1000;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  cfg = {};
  cfg.f0_floor = 600.0;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  cfg = {};
  cfg.mcc_order = 24;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  cfg = {};
  cfg.frame_shift = 0.0;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
}

TEST_CASE("envelope of a sine peaks at the sine frequency") {
  const mf::AnalysisConfig cfg;
  const auto env = mf::ExtractEnvelope(ms::Sine(220.0, 1.0), cfg);
  CHECK(env.cols() == cfg.spectrum_bins());
  const double target = 220.0 * cfg.fft_size / cfg.sample_rate;
  // Skip the edge frames whose window hangs off the signal.
  for (Eigen::Index t = 2; t < env.rows() - 2; ++t) {
    CHECK(std::abs(ArgMax(env, t) - target) <= 2.0);
  }
  CHECK(env.allFinite());
  CHECK((env.array() > 0.0).all());
}

TEST_CASE("envelope of silence sits at the floor") {
  mf::Waveform silence;
  silence.samples.assign(8000, 0.0);
  const mf::AnalysisConfig cfg;
  const auto env = mf::ExtractEnvelope(silence, cfg);
  CHECK((env.array() == cfg.envelope_floor).all());
}

TEST_CASE("two-tone envelope has local maxima near both tones") {
  const mf::AnalysisConfig cfg;
  const auto env = mf::ExtractEnvelope(ms::SumOfSines({220.0, 880.0}, 1.0), cfg);
  const double scale = static_cast<double>(cfg.fft_size) / cfg.sample_rate;
  const int lo = static_cast<int>(std::lround(220.0 * scale));
  const int hi = static_cast<int>(std::lround(880.0 * scale));
  const auto has_peak_near = [&](Eigen::Index t, int bin) {
    for (int k = std::max(1, bin - 3); k <= bin + 3; ++k) {
      if (env(t, k) >= env(t, k - 1) && env(t, k) >= env(t, k + 1)) return true;
    }
    return false;
  };
  for (Eigen::Index t = 2; t < env.rows() - 2; t += 10) {
    CHECK(has_peak_near(t, lo));
    CHECK(has_peak_near(t, hi));
  }
}

TEST_CASE("analyze is deterministic and satisfies feature invariants") {
  const mf::AnalysisConfig cfg;
  const auto w = ms::SustainedVowel(140.0, ms::VowelTable()[3], 0.6);
  const auto a = mf::Analyze(w, cfg);
  const auto b = mf::Analyze(w, cfg);
  CHECK(a.mcc == b.mcc);
  CHECK(a.f0 == b.f0);
  CHECK(a.aperiodicity == b.aperiodicity);
  CHECK_NOTHROW(a.Validate());
  CHECK(a.mcc.cols() == mass::kMccDim);
  CHECK(a.aperiodicity.cols() == 1);
  CHECK(a.frames() == cfg.FrameCount(w.samples.size()));
}
