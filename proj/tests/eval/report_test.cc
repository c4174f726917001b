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

#include <algorithm>

#include "doctest.h"
#include "mass/binary_io.h"
#include "mass/eval/report.h"
#include "mass/eval/spectral_export.h"
#include "mass/features/analysis.h"
#include "mass/synthetic.h"
#include "test_util.h"

namespace me = mass::eval;
namespace mf = mass::features;
namespace mt = mass::testing;
using mass::FrameMatrix;

namespace {

struct Sets {
  std::vector<std::string> ids;
  std::vector<FrameMatrix> converted, target, original;
};

Sets RandomSets(int n, std::mt19937_64& rng) {
  Sets s;
  std::uniform_int_distribution<int> len(8, 20);
  for (int i = 0; i < n; ++i) {
    s.ids.push_back("pair_" + std::to_string(i));
    s.target.push_back(mt::RandomMatrix(len(rng), 36, rng));
    s.converted.push_back(s.target.back() + mt::RandomMatrix(s.target.back().rows(), 36, rng, 0.1));
    s.original.push_back(mt::RandomMatrix(len(rng), 36, rng));
  }
  return s;
}

}  // namespace

TEST_CASE("converted identical to target scores zero") {
  std::mt19937_64 rng(1);
  Sets s = RandomSets(4, rng);
  const auto r = me::EvaluateDirection("a-to-b", s.ids, s.target, s.target, s.original);
  CHECK(r.converted_mean == 0.0);
  const auto ref = me::EvaluateDirection("a-to-b", s.ids, s.converted, s.target, s.original);
  CHECK(r.zero_effort_mean == ref.zero_effort_mean);
  CHECK(r.pairs() == 4);
}

TEST_CASE("single pair mean equals its utterance value") {
  std::mt19937_64 rng(2);
  Sets s = RandomSets(1, rng);
  const auto r = me::EvaluateDirection("x", s.ids, s.converted, s.target, s.original);
  CHECK(r.converted_mean == me::McdUtterance(s.converted[0], s.target[0]));
  CHECK(r.converted_median == r.converted_mean);
}

TEST_CASE("direction means do not depend on pair order") {
  std::mt19937_64 rng(3);
  Sets s = RandomSets(9, rng);
  const auto a = me::EvaluateDirection("x", s.ids, s.converted, s.target, s.original);
  std::vector<size_t> order(9);
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  Sets p;
  for (size_t i : order) {
    p.ids.push_back(s.ids[i]);
    p.converted.push_back(s.converted[i]);
    p.target.push_back(s.target[i]);
    p.original.push_back(s.original[i]);
  }
  const auto b = me::EvaluateDirection("x", p.ids, p.converted, p.target, p.original);
  CHECK(a.converted_mean == b.converted_mean);
  CHECK(a.zero_effort_mean == b.zero_effort_mean);
  CHECK(a.converted_median == b.converted_median);
  CHECK(a.converted_mean < a.zero_effort_mean);
}

TEST_CASE("report renders a table and JSON") {
  std::mt19937_64 rng(4);
  Sets s = RandomSets(3, rng);
  me::EvalReport report;
  report.directions.push_back(me::EvaluateDirection("natural-to-bright", s.ids, s.converted, s.target, s.original));
  report.directions.push_back(me::EvaluateDirection("bright-to-natural", s.ids, s.target, s.target, s.original));
  report.config["seed"] = 0;
  const std::string text = report.ToText("DEVC");
  CHECK(text.find("Zero effort") != std::string::npos);
  CHECK(text.find("natural-to-bright") != std::string::npos);
  CHECK(text.find("DEVC") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text == report.ToText("DEVC"));

  const auto j = report.ToJson();
  REQUIRE(j.at("directions").size() == 2);
  CHECK(j.at("directions")[0].at("pairs") == 3);
  CHECK(j.at("directions")[0].contains("converted_median"));
  CHECK(j.at("directions")[1].at("converted_mean") == 0.0);
  CHECK(j.dump() == report.ToJson().dump());
}

TEST_CASE("evaluation input errors") {
  std::mt19937_64 rng(5);
  Sets s = RandomSets(2, rng);
  s.original.pop_back();
  CHECK_THROWS_AS(me::EvaluateDirection("x", s.ids, s.converted, s.target, s.original), mass::InputError);
}

TEST_CASE("spectral summaries export and load back") {
  const mf::AnalysisConfig cfg;
  const auto wave = mass::synthetic::SustainedVowel(150.0, mass::synthetic::VowelTable()[0], 0.3);
  const auto feats = mf::Analyze(wave, cfg);
  const auto dir = mt::ScratchDir("spectral_export");

  me::ExportSpectralSummaries(feats, cfg, dir / "a.csv");
  me::ExportSpectralSummaries(feats, cfg, dir / "b.csv");
  const std::string bytes = mass::ReadFileBytes((dir / "a.csv").string());
  CHECK(bytes == mass::ReadFileBytes((dir / "b.csv").string()));

  const std::string header = bytes.substr(0, bytes.find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') + 1 == cfg.fft_size / 2 + 1 + me::kMelBands);

  const auto direct = me::SummarizeSpectra(feats, cfg);
  const auto loaded = me::LoadSpectralSummaries(dir / "a.csv");
  CHECK(loaded.envelope == direct.envelope);
  CHECK(loaded.mel == direct.mel);
  CHECK(loaded.envelope.rows() == feats.frames());
}

TEST_CASE("mel filterbank covers the spectrum") {
  const mf::AnalysisConfig cfg;
  const Eigen::MatrixXd fb = me::MelFilterbank(cfg);
  CHECK(fb.rows() == me::kMelBands);
  CHECK(fb.cols() == 513);
  CHECK(fb.minCoeff() >= 0.0);
  CHECK(fb.maxCoeff() <= 1.0);
  for (int b = 0; b < fb.rows(); ++b) CHECK(fb.row(b).sum() > 0.0);
}
