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

#include <cmath>

#include "core/core_util.h"
#include "doctest.h"
#include "mass/binary_io.h"
#include "mass/features/feature_file.h"
#include "mass/training/trainer.h"

namespace fs = std::filesystem;
namespace mc = mass::core;
namespace mtr = mass::training;
namespace mt = mass::testing;
using mass::FrameMatrix;

namespace {

// Random normalised utterances, lengths 20..80, alternating attributes.
mtr::TrainingSet RandomSet(int utterances, int classes, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(20, 80);
  mtr::TrainingSet set;
  set.num_classes = classes;
  for (int i = 0; i < utterances; ++i) {
    set.mcc.push_back(mt::RandomMatrix(len(rng), mass::kMccDim, rng));
    set.attribute.push_back(i % classes);
  }
  return set;
}

mtr::TrainConfig SmallConfig(uint64_t seed = 3) {
  mtr::TrainConfig cfg;
  cfg.steps = 4;
  cfg.batch_size = 2;
  cfg.segment_frames = 32;
  cfg.seed = seed;
  return cfg;
}

bool SameParameters(const mc::ConversionModel& a, const mc::ConversionModel& b) {
  return a.generator == b.generator && a.discriminator == b.discriminator &&
         a.classifier == b.classifier;
}

}  // namespace

TEST_CASE("minibatches are reproducible and well formed") {
  const auto data = RandomSet(6, 3, 1);
  auto cfg = SmallConfig();
  cfg.segment_frames = 48;
  cfg.batch_size = 5;
  std::mt19937_64 r1(11), r2(11);
  const auto a = mtr::SampleMinibatch(data, cfg, r1);
  const auto b = mtr::SampleMinibatch(data, cfg, r2);
  REQUIRE(a.size() == 5);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.mcc[i] == b.mcc[i]);
    CHECK(a.target[i] == b.target[i]);
    CHECK(a.mcc[i].rows() == 48);
    CHECK(a.mcc[i].cols() == mass::kMccDim);
  }
  a.Validate(3);
}

TEST_CASE("targets are uniform over every attribute") {
  const auto data = RandomSet(6, 3, 2);
  auto cfg = SmallConfig();
  cfg.batch_size = 1;
  std::mt19937_64 rng(5);
  const int draws = 10000;
  std::vector<int> counts(3, 0);
  int self = 0;
  for (int i = 0; i < draws; ++i) {
    const auto b = mtr::SampleMinibatch(data, cfg, rng);
    ++counts[b.target[0]];
    if (b.target[0] == b.source[0]) ++self;
  }
  const double expect = draws / 3.0;
  const double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
  for (int c : counts) CHECK(std::abs(c - expect) <= 3.0 * sigma);
  CHECK(std::abs(self - expect) <= 3.0 * sigma);
}

TEST_CASE("short utterances are padded with their edge frames") {
  mtr::TrainingSet data;
  data.num_classes = 2;
  std::mt19937_64 rng(3);
  data.mcc.push_back(mt::RandomMatrix(10, mass::kMccDim, rng));
  data.attribute.push_back(0);
  auto cfg = SmallConfig();
  cfg.batch_size = 1;
  const auto b = mtr::SampleMinibatch(data, cfg, rng);
  const FrameMatrix& seg = b.mcc[0];
  REQUIRE(seg.rows() == 32);
  CHECK(seg.row(0) == data.mcc[0].row(0));
  CHECK(seg.row(31) == data.mcc[0].row(9));
  CHECK(seg.middleRows(11, 10) == data.mcc[0]);
}

TEST_CASE("zero learning rate leaves parameters untouched") {
  auto cfg = SmallConfig();
  cfg.lr_g = 0.0;
  cfg.lr_dc = 0.0;
  const auto model = mt::TinyModel(2, 4);
  mtr::Trainer trainer(model, RandomSet(4, 2, 4), cfg);
  for (int i = 0; i < 3; ++i) trainer.Step();
  CHECK(SameParameters(trainer.model(), model));
}

TEST_CASE("first step reports finite losses and moves every network") {
  const auto model = mt::TinyModel(2, 5);
  mtr::Trainer trainer(model, RandomSet(4, 2, 5), SmallConfig());
  const auto r = trainer.Step();
  CHECK(r.AllFinite());
  CHECK(r.adv_d > 0.0);
  CHECK(r.cls_c > 0.0);
  CHECK(r.cyc > 0.0);
  CHECK(trainer.step() == 1);
  CHECK(!(trainer.model().generator == model.generator));
  CHECK(!(trainer.model().discriminator == model.discriminator));
  CHECK(!(trainer.model().classifier == model.classifier));
}

TEST_CASE("generator updates reduce reconstruction loss on a fixed batch") {
  auto model = mt::TinyModel(2, 6);
  std::mt19937_64 rng(6);
  const auto batch = mt::RandomBatch(2, 32, 2, rng);
  auto cfg = SmallConfig();
  cfg.lr_g = 1e-3;
  mtr::Optimizers opt(model, cfg);
  mc::ModelGradients grads(model);
  mc::LossWeights w;
  w.adv = 0.0;
  w.cls = 0.0;
  const double before = mc::LossCyc(model, batch, 1.0, nullptr);
  for (int i = 0; i < 50; ++i) {
    grads.SetZero();
    mc::GeneratorObjective(model, batch, w, &grads);
    opt.generator.Step(model.generator, grads.generator);
  }
  CHECK(mc::LossCyc(model, batch, 1.0, nullptr) < before);
}

TEST_CASE("loss trajectory is deterministic for a fixed seed") {
  const auto data = RandomSet(4, 2, 7);
  mtr::Trainer a(mt::TinyModel(2, 7), data, SmallConfig(9));
  mtr::Trainer b(mt::TinyModel(2, 7), data, SmallConfig(9));
  for (int i = 0; i < 4; ++i) {
    const auto ra = a.Step();
    const auto rb = b.Step();
    CHECK(ra.total_g == rb.total_g);
    CHECK(ra.total_d == rb.total_d);
    CHECK(ra.total_c == rb.total_c);
  }
  CHECK(SameParameters(a.model(), b.model()));
}

TEST_CASE("resuming from a checkpoint matches an uninterrupted run") {
  const auto data = RandomSet(4, 2, 8);
  const fs::path dir = mt::ScratchDir("trainer_resume");
  mtr::Trainer straight(mt::TinyModel(2, 8), data, SmallConfig(8));
  for (int i = 0; i < 4; ++i) straight.Step();

  mtr::Trainer first(mt::TinyModel(2, 8), data, SmallConfig(8));
  first.Step();
  first.Step();
  first.SaveCheckpoint(dir / "ckpt.mass");
  auto resumed = mtr::Trainer::Resume(dir / "ckpt.mass", data, SmallConfig(8));
  CHECK(resumed.step() == 2);
  resumed.Step();
  resumed.Step();
  CHECK(SameParameters(resumed.model(), straight.model()));

  mc::SaveModel(straight.model(), dir / "a.mass");
  mc::SaveModel(resumed.model(), dir / "b.mass");
  CHECK(mass::ReadFileBytes((dir / "a.mass").string()) == mass::ReadFileBytes((dir / "b.mass").string()));
}

TEST_CASE("a plain model file is not a checkpoint") {
  const fs::path dir = mt::ScratchDir("trainer_plain");
  mc::SaveModel(mt::TinyModel(), dir / "m.mass");
  CHECK_THROWS_AS(mtr::Trainer::Resume(dir / "m.mass", RandomSet(4, 2, 1), SmallConfig()),
                  mass::FormatError);
}

TEST_CASE("training configuration checks") {
  auto cfg = SmallConfig();
  cfg.segment_frames = 16;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  cfg = SmallConfig();
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  cfg = SmallConfig();
  cfg.lr_g = -1.0;
  CHECK_THROWS_AS(cfg.Validate(), mass::ParameterError);
  CHECK_THROWS_AS(mtr::Trainer(mt::TinyModel(2), RandomSet(6, 3, 1), SmallConfig()), mass::ParameterError);
}

TEST_CASE("presets carry the documented block counts") {
  const auto dsvc = mc::NetworkConfig::Dsvc(4, 16);
  CHECK(dsvc.generator_blocks == 10);
  CHECK(dsvc.discriminator_blocks == 4);
  CHECK(dsvc.classifier_blocks == 4);
  const auto devc = mc::NetworkConfig::Devc(2, 16);
  CHECK(devc.generator_blocks == 6);
  CHECK(devc.discriminator_blocks == 2);
  CHECK(devc.classifier_blocks == 2);
}

TEST_CASE("zero steps yields the seeded initial model") {
  const fs::path dir = mt::ScratchDir("trainer_zero_steps");
  mtr::DatasetIndex index;
  index.attribute_names = {"a", "b"};
  index.mcc_mean = Eigen::VectorXd::Zero(mass::kMccDim);
  index.mcc_std = Eigen::VectorXd::Ones(mass::kMccDim);
  index.f0_stats.resize(2);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2; ++i) {
    mass::features::AcousticFeatures f;
    f.mcc = mt::RandomMatrix(40, mass::kMccDim, rng);
    f.f0.assign(40, 0.0);
    f.voiced.assign(40, false);
    f.aperiodicity = FrameMatrix::Ones(40, 5);
    const fs::path p = dir / ("u" + std::to_string(i) + ".massfeat");
    mass::features::WriteFeatureFile(p, f);
    index.entries.push_back({"x/" + std::to_string(i), i, p, 40});
  }
  auto cfg = SmallConfig(21);
  cfg.steps = 0;
  const auto trained = mtr::TrainModel(index, mt::TinyConfig(2), cfg);
  const auto fresh = mc::CreateModel(mt::TinyConfig(2), {"a", "b"}, 21);
  CHECK(SameParameters(trained, fresh));
}
