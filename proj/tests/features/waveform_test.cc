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

#include <fstream>

#include "doctest.h"
#include "mass/binary_io.h"
#include "mass/features/waveform.h"
#include "mass/synthetic.h"
#include "test_util.h"

namespace mf = mass::features;

TEST_CASE("wav round trip is exact to PCM16 resolution") {
  const auto dir = mass::testing::ScratchDir("wav");
  const auto w = mass::synthetic::Sine(330.0, 0.25);
  mf::WriteWav(dir / "a.wav", w);
  const auto back = mf::ReadWav(dir / "a.wav");
  REQUIRE(back.samples.size() == w.samples.size());
  CHECK(back.sample_rate == 16000);
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::abs(back.samples[i] - w.samples[i]) <= 0.5 / 32768.0 + 1e-12);
  }
  // Re-writing decoded PCM16 reproduces the bytes.
  mf::WriteWav(dir / "b.wav", back);
  CHECK(mass::ReadFileBytes((dir / "a.wav").string()) == mass::ReadFileBytes((dir / "b.wav").string()));
}

TEST_CASE("wav reader rejects other rates and formats") {
  const auto dir = mass::testing::ScratchDir("wav_bad");
  auto w = mass::synthetic::Sine(330.0, 0.1, 0.5, 22050);
  mf::WriteWav(dir / "rate.wav", w);
  CHECK_THROWS_AS(mf::ReadWav(dir / "rate.wav"), mass::FormatError);

  std::string bytes = mass::ReadFileBytes((dir / "rate.wav").string());
  bytes[22] = 2;  // channel count
  mass::WriteFileAtomic((dir / "stereo.wav").string(), bytes);
  CHECK_THROWS_AS(mf::ReadWav(dir / "stereo.wav", 22050), mass::FormatError);

  mass::WriteFileAtomic((dir / "junk.wav").string(), "not a wave file at all");
  CHECK_THROWS_AS(mf::ReadWav(dir / "junk.wav"), mass::FormatError);
  CHECK_THROWS_AS(mf::ReadWav(dir / "missing.wav"), mass::IoError);
}

TEST_CASE("waveform validation") {
  mf::Waveform w;
  w.samples = {0.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(w.Validate(), mass::InputError);
  w.samples = {0.0};
  w.sample_rate = 0;
  CHECK_THROWS_AS(w.Validate(), mass::InputError);
}
