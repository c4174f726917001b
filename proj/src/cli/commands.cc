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

#include "mass/cli/commands.h"

#include <cstdlib>
#include <map>

#include "mass/binary_io.h"
#include "mass/eval/report.h"
#include "mass/eval/spectral_export.h"
#include "mass/features/feature_file.h"
#include "mass/features/vocoder.h"
#include "mass/hash.h"
#include "mass/pipeline/pipeline.h"
#include "mass/synthetic.h"
#include "mass/training/dataset.h"

namespace mass::cli {

using nlohmann::json;

namespace {

json InputRecord(const fs::path& p) {
  json r = {{"path", p.string()}};
  if (fs::is_regular_file(p)) r["sha256"] = Sha256File(p);
  return r;
}

void WriteManifest(const std::string& command, const std::vector<fs::path>& inputs,
                   const std::vector<fs::path>& outputs, const RunConfig& cfg, json extra = json::object()) {
  json m;
  m["command"] = command;
  m["inputs"] = json::array();
  for (const auto& p : inputs) m["inputs"].push_back(InputRecord(p));
  m["outputs"] = json::array();
  for (const auto& p : outputs) m["outputs"].push_back(p.string());
  m["config"] = cfg.ToJson();
  m["config_hash"] = ConfigHash(cfg);
  m["seed"] = cfg.train.seed;
  m["version"] = kVersion;
  if (!extra.empty()) m["details"] = std::move(extra);
  WriteFileAtomic(ManifestPath(outputs.front()).string(), m.dump(2) + "\n");
}

void RequireFile(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw IoError(what + " not found: " + p.string());
}

void RequireDir(const fs::path& p, const std::string& what) {
  if (!fs::is_directory(p)) throw IoError(what + " is not a directory: " + p.string());
}

void MakeParent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

features::AcousticFeatures LoadFeatures(const fs::path& p, const features::AnalysisConfig& cfg) {
  if (p.extension() == ".massfeat") return features::ReadFeatureFile(p);
  return features::Analyze(features::ReadWav(p, cfg.sample_rate), cfg);
}

// <dir>/<stem>.wav or <dir>/<stem>.massfeat.
fs::path FindRecording(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".wav", ".massfeat"}) {
    const fs::path p = dir / (stem + ext);
    if (fs::is_regular_file(p)) return p;
  }
  throw InputError("no recording named " + stem + " in " + dir.string());
}

}  // namespace

fs::path ManifestPath(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

void CmdIngest(const fs::path& root, const fs::path& out_index, const RunConfig& cfg) {
  RequireDir(root, "corpus root");
  training::IngestOptions opt;
  opt.jobs = cfg.jobs;
  if (!cfg.cache_dir.empty()) {
    opt.cache_dir = cfg.cache_dir;
  } else if (const char* env = std::getenv("MASS_CACHE_DIR"); env && *env) {
    opt.cache_dir = env;
  }
  training::IngestReport report;
  const auto index = training::IngestDataset(root, cfg.analysis, opt, &report);
  MakeParent(out_index);
  training::WriteIndex(index, out_index);
  WriteManifest("ingest", {root}, {out_index}, cfg,
                {{"entries", index.entries.size()},
                 {"attributes", index.attribute_names},
                 {"skipped", report.skipped},
                 {"warnings", report.warnings}});
}

void CmdTrain(const fs::path& index_path, const fs::path& out_model, const RunConfig& cfg,
              const TrainPaths& paths) {
  RequireFile(index_path, "dataset index");
  const auto index = training::ReadIndex(index_path);
  index.Validate(true);
  const core::NetworkConfig net = cfg.Network(index.num_classes());
  training::TrainOptions opt;
  opt.checkpoint_path = paths.checkpoint;
  opt.log_path = paths.log;
  opt.resume_from = paths.resume;
  opt.metadata["preset"] = cfg.preset;
  if (!cfg.corpus_speaker.empty()) opt.metadata["corpus_speaker"] = cfg.corpus_speaker;
  const auto model = training::TrainModel(index, net, cfg.train, opt);
  MakeParent(out_model);
  core::SaveModel(model, out_model);
  std::vector<fs::path> inputs = {index_path};
  if (!paths.resume.empty()) inputs.push_back(paths.resume);
  WriteManifest("train", inputs, {out_model}, cfg,
                {{"network", core::NetworkConfigToJson(net)}, {"attributes", index.attribute_names}});
}

void CmdConvert(const fs::path& model_path, const fs::path& in_wav, const std::string& source_label,
                const std::string& target_label, const fs::path& out_wav, const RunConfig& cfg) {
  RequireFile(model_path, "model");
  RequireFile(in_wav, "input audio");
  const auto model = core::LoadModel(model_path);
  const auto source = model.Label(source_label);
  const auto target = model.Label(target_label);
  const auto feats = features::Analyze(features::ReadWav(in_wav, cfg.analysis.sample_rate), cfg.analysis);
  const auto converted = pipeline::ConvertUtterance(model, feats, target, source);
  MakeParent(out_wav);
  features::WriteWav(out_wav, features::Synthesize(converted, cfg.analysis));
  WriteManifest("convert", {model_path, in_wav}, {out_wav}, cfg,
                {{"source", source_label}, {"target", target_label}});
}

void CmdSynthesize(const SynthesizeRequest& request, const fs::path& out_wav, const RunConfig& cfg) {
  if (request.text.empty() == request.wav.empty()) {
    throw ParameterError("give exactly one of a text or an input wav");
  }
  pipeline::PipelineConfig pc;
  pc.devc_model = cfg.devc_model;
  pc.dsvc_model = cfg.dsvc_model;
  pc.analysis = cfg.analysis;
  pc.emotion = cfg.emotion;
  pc.speaker = cfg.speaker;
  pc.source_emotion = cfg.source_emotion;
  pc.source_speaker = cfg.source_speaker;
  pc.scratch_dir = cfg.scratch_dir;
  if (pc.devc_model.empty() || pc.dsvc_model.empty()) {
    throw ParameterError("synthesize needs devc_model and dsvc_model");
  }

  pipeline::TtsSource tts;
  if (!request.tts_table.empty()) {
    RequireFile(request.tts_table, "TTS table");
    std::map<std::string, fs::path> table;
    try {
      const json j = json::parse(ReadFileBytes(request.tts_table.string()));
      for (const auto& [text, path] : j.items()) {
        fs::path p = path.get<std::string>();
        if (p.is_relative()) p = request.tts_table.parent_path() / p;
        table[text] = p;
      }
    } catch (const json::exception& e) {
      throw FormatError(request.tts_table.string() + ": " + e.what());
    }
    tts = pipeline::TtsSource::Files(std::move(table));
  } else if (!cfg.tts_command.empty()) {
    tts = pipeline::TtsSource::Command(cfg.tts_command);
  }

  const auto source = request.wav.empty() ? pipeline::SourceSpec::Text(request.text)
                                          : pipeline::SourceSpec::Audio(request.wav);
  pipeline::Trace trace;
  const auto wave = pipeline::MassSynthesize(source, pc, tts, &trace);
  MakeParent(out_wav);
  features::WriteWav(out_wav, wave);
  if (!request.trace.empty()) {
    MakeParent(request.trace);
    WriteFileAtomic(request.trace.string(), pipeline::TraceToJson(trace).dump(2) + "\n");
  }
  std::vector<fs::path> inputs = {pc.devc_model, pc.dsvc_model};
  if (!request.wav.empty()) inputs.push_back(request.wav);
  WriteManifest("synthesize", inputs, {out_wav}, cfg,
                {{"text", request.text}, {"stages", pipeline::StageNames(trace)}});
}

void CmdEvaluate(const fs::path& converted_dir, const fs::path& target_dir,
                 const fs::path& original_dir, const fs::path& out_report, const RunConfig& cfg,
                 const std::string& direction, const std::string& model_name) {
  RequireDir(converted_dir, "converted directory");
  RequireDir(target_dir, "target directory");
  RequireDir(original_dir, "original directory");
  std::vector<std::string> ids;
  for (const auto& f : fs::directory_iterator(target_dir)) {
    const auto ext = f.path().extension();
    if (f.is_regular_file() && (ext == ".wav" || ext == ".massfeat")) ids.push_back(f.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw InputError("no target recordings in " + target_dir.string());

  std::vector<FrameMatrix> converted, target, original;
  for (const auto& id : ids) {
    converted.push_back(LoadFeatures(FindRecording(converted_dir, id), cfg.analysis).mcc);
    target.push_back(LoadFeatures(FindRecording(target_dir, id), cfg.analysis).mcc);
    original.push_back(LoadFeatures(FindRecording(original_dir, id), cfg.analysis).mcc);
  }
  eval::EvalReport report;
  report.directions.push_back(eval::EvaluateDirection(direction, ids, converted, target, original,
                                                      {cfg.mcd_first, cfg.mcd_last}));
  report.config = {{"mcd_first", cfg.mcd_first},
                   {"mcd_last", cfg.mcd_last},
                   {"alignment", "dtw"},
                   {"model_name", model_name}};
  MakeParent(out_report);
  WriteFileAtomic(out_report.string(), report.ToJson().dump(2) + "\n");
  fs::path text = out_report;
  text.replace_extension(".txt");
  WriteFileAtomic(text.string(), report.ToText(model_name));
  WriteManifest("evaluate", {converted_dir, target_dir, original_dir}, {out_report, text}, cfg);
}

void CmdExportFeatures(const fs::path& wav, const fs::path& out_csv, const RunConfig& cfg,
                       const fs::path& feature_file) {
  RequireFile(wav, "input audio");
  const auto feats = features::Analyze(features::ReadWav(wav, cfg.analysis.sample_rate), cfg.analysis);
  MakeParent(out_csv);
  eval::ExportSpectralSummaries(feats, cfg.analysis, out_csv);
  std::vector<fs::path> outputs = {out_csv};
  if (!feature_file.empty()) {
    MakeParent(feature_file);
    features::WriteFeatureFile(feature_file, feats);
    outputs.push_back(feature_file);
  }
  WriteManifest("export-features", {wav}, outputs, cfg);
}

void CmdMakeToyCorpus(const fs::path& dir, uint64_t seed, int train_per_attribute, int test_pairs) {
  synthetic::ToyCorpusSpec spec;
  spec.seed = static_cast<unsigned>(seed);
  spec.train_per_attribute = train_per_attribute;
  spec.test_pairs = test_pairs;
  synthetic::WriteToyCorpus(dir, spec);
}

json ErrorRecord(const std::string& command, const std::exception& e) {
  json r;
  r["command"] = command;
  if (const auto* me = dynamic_cast<const Error*>(&e)) {
    r["error"] = std::string(ErrorKindName(me->kind()));
    if (const auto* se = dynamic_cast<const StageError*>(&e)) r["stage"] = se->stage();
  } else if (dynamic_cast<const fs::filesystem_error*>(&e)) {
    r["error"] = "io";
  } else {
    r["error"] = "internal";
  }
  r["message"] = e.what();
  return r;
}

}  // namespace mass::cli
