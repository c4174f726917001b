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

#include "core_util.h"
#include "doctest.h"
#include "mass/core/cblock.h"
#include "mass/core/networks.h"

namespace mc = mass::core;
namespace mt = mass::testing;

namespace {

mc::Tensor RandomTensor(int c, int h, int w, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  mc::Tensor t(c, h, w);
  for (double& v : t.values()) v = n(rng);
  return t;
}

}  // namespace

TEST_CASE("cblock with zeroed convolutions is the identity") {
  std::mt19937_64 rng(1);
  mc::ParameterSet p;
  const mc::CBlock block(p, "b", 8);
  mc::InitializeParameters(p, rng);
  mt::ZeroPrefix(p, "b/conv");
  const mc::Tensor x = RandomTensor(8, 9, 16, rng);
  const mc::Tensor y = block.Forward(p, x, nullptr);
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y.values()[i] - x.values()[i]));
  }
  CHECK(worst <= 1e-6);
  CHECK(worst == 0.0);
}

TEST_CASE("cblock is deterministic and normalises before the rectifier") {
  std::mt19937_64 rng(2);
  mc::ParameterSet p;
  const mc::CBlock block(p, "b", 8);
  mc::InitializeParameters(p, rng);
  const mc::Tensor x = RandomTensor(8, 9, 40, rng);
  mc::CBlockCache cache;
  const mc::Tensor a = block.Forward(p, x, &cache);
  const mc::Tensor b = block.Forward(p, x, nullptr);
  CHECK(a.values() == b.values());
  CHECK(a.SameShape(x));

  const auto m = cache.norm1.normalized.AsMatrix();
  for (int c = 0; c < m.rows(); ++c) {
    const double mean = m.row(c).mean();
    const double var = (m.row(c).array() - mean).square().mean();
    CHECK(std::abs(mean) <= 1e-5);
    CHECK(std::abs(var - 1.0) <= 1e-3);
  }
}

TEST_CASE("cblock gradients match finite differences") {
  std::mt19937_64 rng(3);
  mc::ParameterSet p;
  const mc::CBlock block(p, "b", 4);
  mc::InitializeParameters(p, rng);
  const mc::Tensor x = RandomTensor(4, 6, 8, rng);
  const mc::Tensor dy = RandomTensor(4, 6, 8, rng);
  mc::CBlockCache cache;
  block.Forward(p, x, &cache);
  mc::Gradients g(p);
  block.Backward(p, cache, dy, &g);
  auto loss = [&] {
    const mc::Tensor y = block.Forward(p, x, nullptr);
    double s = 0.0;
    for (size_t i = 0; i < y.size(); ++i) s += y.values()[i] * dy.values()[i];
    return s;
  };
  const auto r = mt::CheckGradients(p, g, loss, 10, rng);
  CHECK(r.pass_rate() >= 0.95);
}

TEST_CASE("presets") {
  const auto devc = mc::NetworkConfig::Devc(4);
  CHECK(devc.generator_blocks == 6);
  CHECK(devc.discriminator_blocks == 2);
  CHECK(devc.classifier_blocks == 2);
  const auto dsvc = mc::NetworkConfig::Dsvc(3);
  CHECK(dsvc.generator_blocks == 10);
  CHECK(dsvc.discriminator_blocks == 4);
  CHECK(dsvc.classifier_blocks == 4);
  CHECK(dsvc.input_dim == 36);
  auto bad = devc;
  bad.base_channels = 4;
  CHECK_THROWS_AS(bad.Validate(), mass::ParameterError);
}

TEST_CASE("label planes are one-hot") {
  const int k = 4;
  const mc::Tensor image(1, 36, 32, 0.5);
  for (int label = 0; label < k; ++label) {
    const mc::Tensor in = mc::ConditionedInput(image, label, k);
    REQUIRE(in.channels() == 1 + k);
    for (int c = 0; c < k; ++c) {
      const auto plane = in.AsMatrix().row(1 + c);
      CHECK(plane.minCoeff() == (c == label ? 1.0 : 0.0));
      CHECK(plane.maxCoeff() == (c == label ? 1.0 : 0.0));
    }
    CHECK(in.AsMatrix().row(0).minCoeff() == 0.5);
  }
  CHECK_THROWS_AS(mc::ConditionedInput(image, k, k), mass::ParameterError);
}

TEST_CASE("generator keeps the input shape for any length") {
  const auto model = mc::CreateModel(mc::NetworkConfig::Devc(2, 8), mt::ClassNames(2), 11);
  std::mt19937_64 rng(4);
  for (int frames : {32, 64, 100, 257}) {
    const mass::FrameMatrix x = mt::RandomMatrix(frames, 36, rng);
    const mass::FrameMatrix y = mc::GeneratorForward(model, x, mc::AttributeLabel(1, 2));
    CHECK(y.rows() == frames);
    CHECK(y.cols() == 36);
    CHECK(y.allFinite());
  }
}

TEST_CASE("generator rejects short input and unknown targets") {
  const auto model = mt::TinyModel(2);
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(mc::GeneratorForward(model, mt::RandomMatrix(31, 36, rng),
                                       mc::AttributeLabel(0, 2)),
                  mass::InputError);
  CHECK_THROWS_AS(mc::AttributeLabel(2, 2), mass::ParameterError);
  CHECK_THROWS_AS(mc::GeneratorForward(model, mt::RandomMatrix(40, 36, rng),
                                       mc::AttributeLabel(2, 3)),
                  mass::ParameterError);
  CHECK_THROWS_AS(mc::DiscriminatorForward(model, mt::RandomMatrix(20, 36, rng),
                                           mc::AttributeLabel(0, 2)),
                  mass::InputError);
  CHECK_THROWS_AS(mc::ClassifierForward(model, mt::RandomMatrix(40, 24, rng)), mass::InputError);
}

TEST_CASE("zeroed output convolution gives an identity generator") {
  auto model = mt::TinyModel(2);
  mt::ZeroPrefix(model.generator, "out/");
  std::mt19937_64 rng(6);
  const mass::FrameMatrix x = mt::RandomMatrix(45, 36, rng);
  const mass::FrameMatrix y = mc::GeneratorForward(model, x, mc::AttributeLabel(0, 2));
  CHECK((y - x).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("discriminator and classifier ranges") {
  const auto model = mc::CreateModel(mc::NetworkConfig::Devc(3, 8), mt::ClassNames(3), 12);
  std::mt19937_64 rng(7);
  for (int frames : {32, 257}) {
    const mass::FrameMatrix x = mt::RandomMatrix(frames, 36, rng);
    for (int c = 0; c < 3; ++c) {
      const double d = mc::DiscriminatorForward(model, x, mc::AttributeLabel(c, 3));
      CHECK(d > 0.0);
      CHECK(d < 1.0);
      CHECK(d == mc::DiscriminatorForward(model, x, mc::AttributeLabel(c, 3)));
    }
    const Eigen::VectorXd p = mc::ClassifierForward(model, x);
    REQUIRE(p.size() == 3);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-6);
  }
}

TEST_CASE("generator conditioning changes the output after one update") {
  auto model = mt::TinyModel(2);
  std::mt19937_64 rng(8);
  const auto batch = mt::RandomBatch(2, 32, 2, rng);
  mc::ModelGradients grads(model);
  mc::GeneratorObjective(model, batch, mc::LossWeights{}, &grads);
  for (int t = 0; t < model.generator.size(); ++t) {
    for (size_t i = 0; i < model.generator[t].value.size(); ++i) {
      model.generator[t].value[i] -= 1e-2 * grads.generator[t][i];
    }
  }
  const mass::FrameMatrix x = mt::RandomMatrix(48, 36, rng);
  const auto y0 = mc::GeneratorForward(model, x, mc::AttributeLabel(0, 2));
  const auto y1 = mc::GeneratorForward(model, x, mc::AttributeLabel(1, 2));
  CHECK((y0 - y1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("discriminator input gradient matches finite differences") {
  const auto model = mt::TinyModel(2);
  const auto& net = mc::NetworksFor(model.config).discriminator;
  std::mt19937_64 rng(9);
  mass::FrameMatrix x = mt::RandomMatrix(33, 36, rng);
  auto neg_log_d = [&] { return -std::log(mc::Sigmoid(net.Logit(model.discriminator, x, 1, nullptr))); };
  mc::EncoderTape tape;
  const double logit = net.Logit(model.discriminator, x, 1, &tape);
  const mass::FrameMatrix dx = net.Backward(model.discriminator, tape, mc::Sigmoid(logit) - 1.0, nullptr);
  std::uniform_int_distribution<int> row(0, 32), col(0, 35);
  int passed = 0;
  const int n = 60;
  for (int k = 0; k < n; ++k) {
    const int r = row(rng), c = col(rng);
    const double saved = x(r, c);
    x(r, c) = saved + 1e-5;
    const double up = neg_log_d();
    x(r, c) = saved - 1e-5;
    const double down = neg_log_d();
    x(r, c) = saved;
    const double numeric = (up - down) / 2e-5;
    const double rel = std::abs(numeric - dx(r, c)) /
                       std::max({std::abs(numeric), std::abs(dx(r, c)), 1e-8});
    if (rel <= 1e-3) ++passed;
  }
  CHECK(passed >= 0.95 * n);
}
