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

#include "core_util.h"
#include "doctest.h"
#include "mass/binary_io.h"

namespace mc = mass::core;
namespace mt = mass::testing;

namespace {

mc::ConversionModel DecoratedModel() {
  auto m = mt::TinyModel(3, 5);
  m.attribute_names = {"natural", "happy", "sad"};
  for (int i = 0; i < mass::kMccDim; ++i) {
    m.feature_mean(i) = 0.1 * i - 1.0 / 3.0;
    m.feature_std(i) = 0.5 + std::sqrt(static_cast<double>(i + 1));
  }
  m.f0_stats = {{4.8, 0.2, 100}, {5.1, 0.31, 90}, {4.6, 1.0 / 7.0, 80}};
  m.metadata["corpus_speaker"] = "spk_a";
  return m;
}

void ExpectEqual(const mc::ConversionModel& a, const mc::ConversionModel& b) {
  CHECK(a.config == b.config);
  CHECK(a.attribute_names == b.attribute_names);
  CHECK(a.generator == b.generator);
  CHECK(a.discriminator == b.discriminator);
  CHECK(a.classifier == b.classifier);
  CHECK(a.feature_mean == b.feature_mean);
  CHECK(a.feature_std == b.feature_std);
  REQUIRE(a.f0_stats.size() == b.f0_stats.size());
  for (size_t i = 0; i < a.f0_stats.size(); ++i) {
    CHECK(a.f0_stats[i].mean_log_f0 == b.f0_stats[i].mean_log_f0);
    CHECK(a.f0_stats[i].std_log_f0 == b.f0_stats[i].std_log_f0);
    CHECK(a.f0_stats[i].n_voiced_frames == b.f0_stats[i].n_voiced_frames);
  }
  CHECK(a.metadata == b.metadata);
}

void Patch(const std::filesystem::path& path, size_t offset, std::string_view bytes) {
  std::string data = mass::ReadFileBytes(path.string());
  data.replace(offset, bytes.size(), bytes);
  std::ofstream(path, std::ios::binary) << data;
}

}  // namespace

TEST_CASE("model round trip is bit exact") {
  const auto dir = mt::ScratchDir("model_roundtrip");
  const auto m = DecoratedModel();
  mc::SaveModel(m, dir / "m.massmodel");
  const auto loaded = mc::LoadModel(dir / "m.massmodel");
  ExpectEqual(m, loaded);

  std::mt19937_64 rng(1);
  const auto x = mt::RandomMatrix(40, 36, rng);
  CHECK(mc::GeneratorForward(m, x, m.Label("sad")) ==
        mc::GeneratorForward(loaded, x, loaded.Label("sad")));
}

TEST_CASE("extras travel with the model") {
  const auto dir = mt::ScratchDir("model_extras");
  const auto m = DecoratedModel();
  mc::ModelFileExtras extras;
  extras.groups["adam_m/generator"] = m.generator;
  extras.state["step"] = 17;
  mc::SaveModel(m, dir / "ckpt", &extras);
  mc::ModelFileExtras back;
  const auto loaded = mc::LoadModel(dir / "ckpt", &back);
  ExpectEqual(m, loaded);
  CHECK(back.groups.at("adam_m/generator") == m.generator);
  CHECK(back.state.at("step") == 17);
}

TEST_CASE("file starts with the magic and a manifest") {
  const auto dir = mt::ScratchDir("model_layout");
  mc::SaveModel(DecoratedModel(), dir / "m");
  const std::string bytes = mass::ReadFileBytes((dir / "m").string());
  CHECK(bytes.substr(0, 8) == "MASSMODL");
  mass::ByteReader in(bytes, "m");
  in.ReadBytes(8);
  const auto len = in.Read<uint32_t>();
  const auto manifest = nlohmann::json::parse(in.ReadBytes(len));
  CHECK(manifest.at("format_version") == 1);
  CHECK(manifest.at("config").at("generator_blocks") == 1);
  const auto& last = manifest.at("tensors").back();
  CHECK(last.at("offset").get<size_t>() + 4 * last.at("count").get<size_t>() == in.remaining());
}

TEST_CASE("corrupted files are rejected") {
  const auto dir = mt::ScratchDir("model_corrupt");
  const auto path = dir / "m";
  mc::SaveModel(DecoratedModel(), path);

  SUBCASE("bad magic") {
    Patch(path, 0, "XASS");
    CHECK_THROWS_AS(mc::LoadModel(path), mass::FormatError);
  }
  SUBCASE("version mismatch") {
    std::string data = mass::ReadFileBytes(path.string());
    const std::string key = "\"format_version\":1";
    const size_t at = data.find(key);
    REQUIRE(at != std::string::npos);
    Patch(path, at + key.size() - 1, "7");
    CHECK_THROWS_AS(mc::LoadModel(path), mass::VersionError);
  }
  SUBCASE("truncated payload") {
    std::string data = mass::ReadFileBytes(path.string());
    data.resize(data.size() - 10);
    std::ofstream(path, std::ios::binary | std::ios::trunc) << data;
    CHECK_THROWS_AS(mc::LoadModel(path), mass::FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(mc::LoadModel(dir / "nope"), mass::IoError);
  }
}

TEST_CASE("attribute lookup") {
  const auto m = DecoratedModel();
  CHECK(m.AttributeIndex("happy") == 1);
  CHECK(m.Label("sad").index() == 2);
  CHECK_THROWS_AS(m.AttributeIndex("angry"), mass::ParameterError);
  const auto onehot = m.Label("happy").OneHot();
  CHECK(onehot.sum() == 1.0);
  CHECK(onehot(1) == 1.0);
}

TEST_CASE("normalisation round trip") {
  const auto m = DecoratedModel();
  std::mt19937_64 rng(2);
  const auto x = mt::RandomMatrix(10, 36, rng);
  CHECK((m.Denormalize(m.Normalize(x)) - x).cwiseAbs().maxCoeff() <= 1e-12);
  auto bad = m;
  bad.feature_std(3) = 0.0;
  CHECK_THROWS_AS(bad.Validate(), mass::ParameterError);
}
