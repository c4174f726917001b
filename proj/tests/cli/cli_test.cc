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

#include <cstdlib>
#include <fstream>

#include "core/core_util.h"
#include "doctest.h"
#include "mass/binary_io.h"
#include "mass/cli/commands.h"
#include "mass/features/vocoder.h"
#include "mass/synthetic.h"
#include "mass/training/dataset.h"

namespace fs = std::filesystem;
namespace mc = mass::core;
namespace mcl = mass::cli;
namespace mf = mass::features;
namespace mt = mass::testing;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string err;
};

// Runs the built binary with stderr captured.
Result RunMass(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(MASS_BINARY) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), mass::ReadFileBytes(err.string())};
}

mcl::RunConfig TinyRun() {
  mcl::RunConfig c;
  c.base_channels = 8;
  c.generator_blocks = 1;
  c.discriminator_blocks = 1;
  c.classifier_blocks = 1;
  c.train.steps = 2;
  c.train.batch_size = 2;
  c.train.segment_frames = 32;
  return c;
}

void WriteConfig(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(); }

// Two attributes, two short vowels each.
fs::path Corpus(const fs::path& dir) {
  for (int a = 0; a < 2; ++a) {
    const fs::path d = dir / "corpus" / (a ? "bright" : "natural");
    fs::create_directories(d);
    for (int i = 0; i < 2; ++i) {
      mf::WriteWav(d / ("u" + std::to_string(i) + ".wav"),
                   mass::synthetic::SustainedVowel(120.0 + 60.0 * a + 7.0 * i, mass::synthetic::VowelTable()[i], 0.3));
    }
  }
  return dir / "corpus";
}

}  // namespace

TEST_CASE("run config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(mcl::RunConfig::FromJson({{"stepz", 3}}), mass::ParameterError);
  CHECK_THROWS_AS(mcl::RunConfig::FromJson({{"steps", "many"}}), mass::ParameterError);
  CHECK_THROWS_AS(mcl::RunConfig::FromJson({{"preset", "big"}}), mass::ParameterError);
  CHECK_THROWS_AS(mcl::RunConfig::FromJson({{"fft_size", 1000}}), mass::ParameterError);
  CHECK_THROWS_AS(mcl::RunConfig::FromJson(json::array()), mass::ParameterError);

  const auto c = mcl::RunConfig::FromJson({{"steps", 7}, {"lambda_cyc", 2.0}, {"f0_ceil", 400.0}, {"seed", 5}});
  CHECK(c.train.steps == 7);
  CHECK(c.train.weights.cyc == 2.0);
  CHECK(c.analysis.f0_ceil == 400.0);
  CHECK(c.train.seed == 5);
  const auto back = mcl::RunConfig::FromJson(c.ToJson());
  CHECK(back.ToJson() == c.ToJson());
  CHECK(mcl::ConfigHash(back) == mcl::ConfigHash(c));
  CHECK(mcl::ConfigHash(mcl::RunConfig{}) != mcl::ConfigHash(c));
}

TEST_CASE("presets expand to their block counts") {
  mcl::RunConfig c;
  c.preset = "dsvc";
  auto n = c.Network(3);
  CHECK(n.generator_blocks == 10);
  CHECK(n.discriminator_blocks == 4);
  CHECK(n.classifier_blocks == 4);
  c.preset = "devc";
  n = c.Network(3);
  CHECK(n.generator_blocks == 6);
  CHECK(n.discriminator_blocks == 2);
  c.generator_blocks = 1;
  CHECK(c.Network(3).generator_blocks == 1);
}

TEST_CASE("zero training steps writes the seeded initial model") {
  const fs::path dir = mt::ScratchDir("cli_zero_steps");
  const fs::path corpus = Corpus(dir);
  auto cfg = TinyRun();
  cfg.cache_dir = (dir / "cache").string();
  cfg.train.steps = 0;
  cfg.train.seed = 13;
  mcl::CmdIngest(corpus, dir / "index.json", cfg);
  CHECK(fs::exists(mcl::ManifestPath(dir / "index.json")));
  mcl::CmdTrain(dir / "index.json", dir / "model.mass", cfg);
  const auto loaded = mc::LoadModel(dir / "model.mass");
  const auto fresh = mc::CreateModel(cfg.Network(2), {"bright", "natural"}, 13);
  CHECK(loaded.generator == fresh.generator);
  CHECK(loaded.discriminator == fresh.discriminator);
  CHECK(loaded.classifier == fresh.classifier);
}

TEST_CASE("convert to the source attribute with an identity model") {
  const fs::path dir = mt::ScratchDir("cli_convert");
  auto model = mc::CreateModel(mt::TinyConfig(2), {"a", "b"}, 2);
  mt::ZeroPrefix(model.generator, "out/");
  model.f0_stats.assign(2, {std::log(140.0), 0.1, 10});
  mc::SaveModel(model, dir / "id.mass");
  const auto wave = mass::synthetic::SustainedVowel(140.0, mass::synthetic::VowelTable()[2], 0.4);
  mf::WriteWav(dir / "in.wav", wave);
  const std::string model_before = mass::ReadFileBytes((dir / "id.mass").string());
  const std::string wav_before = mass::ReadFileBytes((dir / "in.wav").string());

  mcl::CmdConvert(dir / "id.mass", dir / "in.wav", "a", "a", dir / "out.wav", {});
  const auto out = mf::ReadWav(dir / "out.wav");
  const auto reference = mf::Synthesize(mf::Analyze(mf::ReadWav(dir / "in.wav"), {}), {});
  REQUIRE(out.samples.size() == reference.samples.size());
  double worst = 0.0;
  for (size_t i = 0; i < out.samples.size(); ++i) worst = std::max(worst, std::abs(out.samples[i] - reference.samples[i]));
  CHECK(worst <= 1.0 / 32768.0);
  // Inputs are left alone.
  CHECK(mass::ReadFileBytes((dir / "id.mass").string()) == model_before);
  CHECK(mass::ReadFileBytes((dir / "in.wav").string()) == wav_before);
  CHECK_THROWS_AS(mcl::CmdConvert(dir / "id.mass", dir / "in.wav", "a", "zzz", dir / "o2.wav", {}),
                  mass::ParameterError);
}

TEST_CASE("identical runs give identical artifacts") {
  const fs::path dir = mt::ScratchDir("cli_repro");
  const fs::path corpus = Corpus(dir);
  auto cfg = TinyRun();
  cfg.cache_dir = (dir / "cache").string();
  cfg.corpus_speaker = "spk";
  for (const char* run : {"a", "b"}) {
    const fs::path out = dir / run;
    mcl::CmdIngest(corpus, out / "index.json", cfg);
    mcl::CmdTrain(out / "index.json", out / "model.mass", cfg);
    fs::create_directories(out / "conv");
    for (const char* u : {"u0.wav", "u1.wav"}) {
      mcl::CmdConvert(out / "model.mass", corpus / "natural" / u, "natural", "bright", out / "conv" / u, cfg);
    }
    mcl::CmdEvaluate(out / "conv", corpus / "bright", corpus / "natural", out / "report.json", cfg,
                     "natural-to-bright");
  }
  for (const char* file : {"index.json", "model.mass", "conv/u0.wav", "conv/u1.wav",
                           "report.json", "report.txt"}) {
    CAPTURE(file);
    CHECK(mass::ReadFileBytes((dir / "a" / file).string()) == mass::ReadFileBytes((dir / "b" / file).string()));
  }
  // Manifests differ only in the recorded paths.
  auto manifest = json::parse(mass::ReadFileBytes((dir / "a" / "model.mass.manifest.json").string()));
  auto other = json::parse(mass::ReadFileBytes((dir / "b" / "model.mass.manifest.json").string()));
  CHECK(manifest.at("inputs")[0].at("sha256") == other.at("inputs")[0].at("sha256"));
  for (auto* m : {&manifest, &other}) {
    m->erase("inputs");
    m->erase("outputs");
  }
  CHECK(manifest == other);
  CHECK(manifest.at("command") == "train");
  CHECK(manifest.at("seed") == 0);
  CHECK(manifest.at("config_hash") == mcl::ConfigHash(cfg));
  CHECK(mc::LoadModel(dir / "a" / "model.mass").metadata.at("corpus_speaker") == "spk");
}

TEST_CASE("evaluate reports pairs matched by name") {
  const fs::path dir = mt::ScratchDir("cli_evaluate");
  const fs::path corpus = Corpus(dir);
  mcl::CmdEvaluate(corpus / "bright", corpus / "bright", corpus / "natural", dir / "r.json", {}, "n-to-b", "Oracle");
  const auto r = json::parse(mass::ReadFileBytes((dir / "r.json").string()));
  CHECK(r.at("directions")[0].at("pairs") == 2);
  CHECK(r.at("directions")[0].at("converted_mean") == 0.0);
  CHECK(r.at("directions")[0].at("zero_effort_mean").get<double>() > 0.0);
  CHECK(mass::ReadFileBytes((dir / "r.txt").string()).find("Oracle") != std::string::npos);
  fs::remove(corpus / "natural" / "u1.wav");
  CHECK_THROWS_AS(mcl::CmdEvaluate(corpus / "bright", corpus / "bright", corpus / "natural", dir / "r2.json", {}),
                  mass::InputError);
}

TEST_CASE("export-features writes the spectral CSV and features") {
  const fs::path dir = mt::ScratchDir("cli_export");
  mf::WriteWav(dir / "v.wav", mass::synthetic::SustainedVowel(150.0, mass::synthetic::VowelTable()[0], 0.2));
  mcl::CmdExportFeatures(dir / "v.wav", dir / "v.csv", {}, dir / "v.massfeat");
  CHECK(fs::exists(dir / "v.csv"));
  CHECK(fs::exists(dir / "v.massfeat"));
  CHECK(fs::exists(mcl::ManifestPath(dir / "v.csv")));
}

TEST_CASE("cache directory comes from the environment") {
  const fs::path dir = mt::ScratchDir("cli_env_cache");
  const fs::path corpus = Corpus(dir);
  ::setenv("MASS_CACHE_DIR", (dir / "envcache").c_str(), 1);
  mcl::CmdIngest(corpus, dir / "index.json", {});
  ::unsetenv("MASS_CACHE_DIR");
  CHECK(fs::exists(dir / "envcache"));
  CHECK(!fs::exists(corpus / ".mass_cache"));
}

TEST_CASE("binary exits 1 with a one-line JSON error") {
  const fs::path dir = mt::ScratchDir("cli_binary");
  auto r = RunMass("convert " + (dir / "missing.mass").string() + " a.wav b.wav --source x --target y", dir);
  CHECK(r.status == 1);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  auto rec = json::parse(r.err);
  CHECK(rec.at("command") == "convert");
  CHECK(rec.at("error") == "io");

  WriteConfig(dir / "bad.json", {{"unknown_key", 1}});
  r = RunMass("ingest " + dir.string() + " " + (dir / "i.json").string() + " --config " + (dir / "bad.json").string(), dir);
  CHECK(r.status == 1);
  rec = json::parse(r.err);
  CHECK(rec.at("error") == "parameter");
  CHECK(rec.at("message").get<std::string>().find("unknown_key") != std::string::npos);

  r = RunMass("train", dir);
  CHECK(r.status == 1);
  CHECK(json::parse(r.err).at("error") == "usage");

  r = RunMass("--help", dir);
  CHECK(r.status == 0);
}

TEST_CASE("binary runs the toy corpus recipe steps") {
  const fs::path dir = mt::ScratchDir("cli_binary_recipe");
  auto r = RunMass("make-toy-corpus " + (dir / "toy").string() + " --train-per-attribute 2 --test-pairs 1", dir);
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "toy" / "train" / "natural"));
  CHECK(fs::exists(dir / "toy" / "test" / "bright" / "pair_000.wav"));
  r = RunMass("ingest " + (dir / "toy" / "train").string() + " " + (dir / "index.json").string() + " --jobs 2", dir);
  CHECK(r.status == 0);
  const auto index = mass::training::ReadIndex(dir / "index.json");
  CHECK(index.entries.size() == 4);
}

TEST_CASE("synthesize chains both models and records the trace") {
  const fs::path dir = mt::ScratchDir("cli_synthesize");
  auto devc = mc::CreateModel(mt::TinyConfig(2), {"angry", "natural"}, 4);
  devc.metadata["corpus_speaker"] = "spk_a";
  devc.f0_stats.assign(2, {std::log(140.0), 0.1, 10});
  auto dsvc = mc::CreateModel(mt::TinyConfig(2), {"spk_a", "spk_b"}, 5);
  dsvc.f0_stats.assign(2, {std::log(140.0), 0.1, 10});
  mc::SaveModel(devc, dir / "devc.mass");
  mc::SaveModel(dsvc, dir / "dsvc.mass");
  mf::WriteWav(dir / "hello.wav", mass::synthetic::SustainedVowel(140.0, mass::synthetic::VowelTable()[3], 0.3));
  std::ofstream(dir / "tts.json") << json{{"hello there", "hello.wav"}}.dump();

  mcl::RunConfig cfg;
  cfg.devc_model = (dir / "devc.mass").string();
  cfg.dsvc_model = (dir / "dsvc.mass").string();
  cfg.emotion = "angry";
  cfg.speaker = "spk_b";
  mcl::SynthesizeRequest req;
  req.text = "hello there";
  req.tts_table = dir / "tts.json";
  req.trace = dir / "trace.json";
  mcl::CmdSynthesize(req, dir / "out.wav", cfg);
  const auto trace = json::parse(mass::ReadFileBytes((dir / "trace.json").string()));
  std::vector<std::string> stages;
  for (const auto& e : trace) stages.push_back(e.at("stage"));
  CHECK(stages == std::vector<std::string>{"tts", "analyze", "devc", "dsvc", "synthesize"});
  CHECK(mf::ReadWav(dir / "out.wav").samples.size() > 0);

  mcl::SynthesizeRequest both = req;
  both.wav = dir / "hello.wav";
  CHECK_THROWS_AS(mcl::CmdSynthesize(both, dir / "o.wav", cfg), mass::ParameterError);
  cfg.emotion = "sad";
  CHECK_THROWS_AS(mcl::CmdSynthesize(req, dir / "o.wav", cfg), mass::StageError);
}
