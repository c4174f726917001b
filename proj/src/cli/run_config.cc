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

#include "mass/cli/run_config.h"

#include <fstream>
#include <set>

#include "mass/binary_io.h"
#include "mass/features/analysis_json.h"
#include "mass/hash.h"

namespace mass::cli {

using nlohmann::json;

RunConfig RunConfig::FromJson(const json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  static const std::set<std::string> analysis_keys = [] {
    std::set<std::string> keys;
    const json defaults = features::AnalysisConfigToJson({});
    for (const auto& [k, v] : defaults.items()) keys.insert(k);
    return keys;
  }();

  RunConfig c;
  json analysis = json::object();
  try {
    for (const auto& [key, v] : j.items()) {
      if (analysis_keys.count(key)) analysis[key] = v;
      else if (key == "steps") c.train.steps = v.get<int>();
      else if (key == "batch_size") c.train.batch_size = v.get<int>();
      else if (key == "segment_frames") c.train.segment_frames = v.get<int>();
      else if (key == "lr_g") c.train.lr_g = v.get<double>();
      else if (key == "lr_dc") c.train.lr_dc = v.get<double>();
      else if (key == "beta1") c.train.beta1 = v.get<double>();
      else if (key == "beta2") c.train.beta2 = v.get<double>();
      else if (key == "seed") c.train.seed = v.get<uint64_t>();
      else if (key == "d_steps_per_g_step") c.train.d_steps_per_g_step = v.get<int>();
      else if (key == "checkpoint_every") c.train.checkpoint_every = v.get<int>();
      else if (key == "lambda_adv") c.train.weights.adv = v.get<double>();
      else if (key == "lambda_cls") c.train.weights.cls = v.get<double>();
      else if (key == "lambda_cyc") c.train.weights.cyc = v.get<double>();
      else if (key == "lambda_id") c.train.weights.id = v.get<double>();
      else if (key == "rho") c.train.weights.rho = v.get<double>();
      else if (key == "preset") c.preset = v.get<std::string>();
      else if (key == "base_channels") c.base_channels = v.get<int>();
      else if (key == "generator_blocks") c.generator_blocks = v.get<int>();
      else if (key == "discriminator_blocks") c.discriminator_blocks = v.get<int>();
      else if (key == "classifier_blocks") c.classifier_blocks = v.get<int>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
      else if (key == "corpus_speaker") c.corpus_speaker = v.get<std::string>();
      else if (key == "devc_model") c.devc_model = v.get<std::string>();
      else if (key == "dsvc_model") c.dsvc_model = v.get<std::string>();
      else if (key == "emotion") c.emotion = v.get<std::string>();
      else if (key == "speaker") c.speaker = v.get<std::string>();
      else if (key == "source_emotion") c.source_emotion = v.get<std::string>();
      else if (key == "source_speaker") c.source_speaker = v.get<std::string>();
      else if (key == "tts_command") c.tts_command = v.get<std::string>();
      else if (key == "scratch_dir") c.scratch_dir = v.get<std::string>();
      else if (key == "mcd_first") c.mcd_first = v.get<int>();
      else if (key == "mcd_last") c.mcd_last = v.get<int>();
      else throw ParameterError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  c.analysis = features::AnalysisConfigFromJson(analysis);
  c.Validate();
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  const std::string text = ReadFileBytes(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return FromJson(j);
}

json RunConfig::ToJson() const {
  json j = features::AnalysisConfigToJson(analysis);
  j["steps"] = train.steps;
  j["batch_size"] = train.batch_size;
  j["segment_frames"] = train.segment_frames;
  j["lr_g"] = train.lr_g;
  j["lr_dc"] = train.lr_dc;
  j["beta1"] = train.beta1;
  j["beta2"] = train.beta2;
  j["seed"] = train.seed;
  j["d_steps_per_g_step"] = train.d_steps_per_g_step;
  j["checkpoint_every"] = train.checkpoint_every;
  j["lambda_adv"] = train.weights.adv;
  j["lambda_cls"] = train.weights.cls;
  j["lambda_cyc"] = train.weights.cyc;
  j["lambda_id"] = train.weights.id;
  j["rho"] = train.weights.rho;
  j["preset"] = preset;
  j["base_channels"] = base_channels;
  j["generator_blocks"] = generator_blocks;
  j["discriminator_blocks"] = discriminator_blocks;
  j["classifier_blocks"] = classifier_blocks;
  j["jobs"] = jobs;
  j["cache_dir"] = cache_dir;
  j["corpus_speaker"] = corpus_speaker;
  j["devc_model"] = devc_model;
  j["dsvc_model"] = dsvc_model;
  j["emotion"] = emotion;
  j["speaker"] = speaker;
  j["source_emotion"] = source_emotion;
  j["source_speaker"] = source_speaker;
  j["tts_command"] = tts_command;
  j["scratch_dir"] = scratch_dir;
  j["mcd_first"] = mcd_first;
  j["mcd_last"] = mcd_last;
  return j;
}

void RunConfig::Validate() const {
  analysis.Validate();
  train.Validate();
  if (preset != "devc" && preset != "dsvc") {
    throw ParameterError("preset must be \"devc\" or \"dsvc\", got \"" + preset + "\"");
  }
  if (jobs < 1) throw ParameterError("jobs must be positive");
  if (mcd_first < 0 || mcd_last < mcd_first || mcd_last >= kMccDim) {
    throw ParameterError("MCD coefficient range must satisfy 0 <= mcd_first <= mcd_last < 36");
  }
  for (int blocks : {generator_blocks, discriminator_blocks, classifier_blocks}) {
    if (blocks < -1) throw ParameterError("block counts must be nonnegative (or -1 for the preset)");
  }
}

core::NetworkConfig RunConfig::Network(int num_classes) const {
  core::NetworkConfig n = preset == "dsvc" ? core::NetworkConfig::Dsvc(num_classes, base_channels)
                                           : core::NetworkConfig::Devc(num_classes, base_channels);
  if (generator_blocks >= 0) n.generator_blocks = generator_blocks;
  if (discriminator_blocks >= 0) n.discriminator_blocks = discriminator_blocks;
  if (classifier_blocks >= 0) n.classifier_blocks = classifier_blocks;
  n.Validate();
  return n;
}

std::string ConfigHash(const RunConfig& cfg) { return Sha256Hex(cfg.ToJson().dump()); }

}  // namespace mass::cli
