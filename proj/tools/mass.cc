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

// mass: command-line front end for ingestion, training, conversion,
// synthesis and evaluation.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mass/cli/commands.h"

namespace mc = mass::cli;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::string trace;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Random seed (overrides the config)");
  cmd->add_option("--jobs", f.jobs, "Worker threads for feature extraction");
}

// Config file first, then flags.
mc::RunConfig Resolve(const CommonFlags& f) {
  mc::RunConfig cfg = f.config.empty() ? mc::RunConfig{} : mc::RunConfig::Load(f.config);
  if (f.seed) cfg.train.seed = *f.seed;
  if (f.jobs) cfg.jobs = *f.jobs;
  cfg.Validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-attribute speech synthesis: emotional then speaker voice conversion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mc::kVersion);
  CommonFlags common;

  std::string root, index, model, out, in_wav, source, target, text, wav, tts_table;
  std::string converted_dir, target_dir, original_dir, direction = "source-to-target",
                                                         model_name = "Converted";
  std::string preset, checkpoint, log, resume, feature_file, corpus_speaker;
  std::optional<int> steps;
  int train_per_attribute = 40, test_pairs = 10;

  auto* ingest = app.add_subcommand("ingest", "Extract and cache features for a corpus");
  ingest->add_option("root", root, "Corpus root: <root>/<attribute>/*.wav")->required();
  ingest->add_option("out_index", out, "Dataset index to write")->required();
  AddCommon(ingest, common);

  auto* train = app.add_subcommand("train", "Train a conversion model");
  train->add_option("index", index, "Dataset index")->required();
  train->add_option("out_model", out, "Model file to write")->required();
  train->add_option("--preset", preset, "devc or dsvc (overrides the config)");
  train->add_option("--steps", steps, "Training steps (overrides the config)");
  train->add_option("--corpus-speaker", corpus_speaker, "Speaker of the training corpus");
  train->add_option("--checkpoint", checkpoint, "Checkpoint file, rewritten periodically");
  train->add_option("--log", log, "NDJSON loss log");
  train->add_option("--resume", resume, "Resume from a checkpoint")->check(CLI::ExistingFile);
  AddCommon(train, common);

  auto* convert = app.add_subcommand("convert", "Convert one recording with one model");
  convert->add_option("model", model, "Model file")->required();
  convert->add_option("in_wav", in_wav, "Input recording")->required();
  convert->add_option("out_wav", out, "Output recording")->required();
  convert->add_option("--source", source, "Source attribute")->required();
  convert->add_option("--target", target, "Target attribute")->required();
  AddCommon(convert, common);

  auto* synth = app.add_subcommand("synthesize", "Source speech, emotional conversion, speaker conversion");
  synth->add_option("out_wav", out, "Output recording")->required();
  auto* text_opt = synth->add_option("--text", text, "Text for the TTS adapter");
  auto* wav_opt = synth->add_option("--wav", wav, "Source recording instead of text");
  text_opt->excludes(wav_opt);
  synth->add_option("--tts-table", tts_table, "JSON map from text to recording");
  synth->add_option("--trace", common.trace, "Write the stage trace as JSON");
  synth->add_option("--emotion", target, "Target emotion (overrides the config)");
  synth->add_option("--speaker", source, "Target speaker (overrides the config)");
  AddCommon(synth, common);

  auto* evaluate = app.add_subcommand("evaluate", "Mel-cepstral distortion against targets");
  evaluate->add_option("converted_dir", converted_dir)->required();
  evaluate->add_option("target_dir", target_dir)->required();
  evaluate->add_option("original_dir", original_dir)->required();
  evaluate->add_option("out_report", out, "JSON report; the table goes to a .txt sibling")->required();
  evaluate->add_option("--direction", direction, "Direction name, e.g. natural-to-angry");
  evaluate->add_option("--model-name", model_name, "Row label for the converted system");
  AddCommon(evaluate, common);

  auto* exportf = app.add_subcommand("export-features", "Spectral summary CSV of a recording");
  exportf->add_option("wav", in_wav)->required();
  exportf->add_option("out_csv", out)->required();
  exportf->add_option("--features", feature_file, "Also write the analysed features");
  AddCommon(exportf, common);

  auto* toy = app.add_subcommand("make-toy-corpus", "Write the synthetic two-attribute corpus");
  toy->add_option("dir", root)->required();
  toy->add_option("--train-per-attribute", train_per_attribute);
  toy->add_option("--test-pairs", test_pairs);
  AddCommon(toy, common);

  std::string command = argc > 1 && argv[1][0] != '-' ? argv[1] : "mass";
  try {
    app.parse(argc, argv);
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    mc::RunConfig cfg = Resolve(common);

    if (*ingest) {
      mc::CmdIngest(root, out, cfg);
    } else if (*train) {
      if (!preset.empty()) cfg.preset = preset;
      if (steps) cfg.train.steps = *steps;
      if (!corpus_speaker.empty()) cfg.corpus_speaker = corpus_speaker;
      cfg.Validate();
      mc::CmdTrain(index, out, cfg, {checkpoint, log, resume});
    } else if (*convert) {
      mc::CmdConvert(model, in_wav, source, target, out, cfg);
    } else if (*synth) {
      if (!target.empty()) cfg.emotion = target;
      if (!source.empty()) cfg.speaker = source;
      mc::CmdSynthesize({text, wav, tts_table, common.trace}, out, cfg);
    } else if (*evaluate) {
      mc::CmdEvaluate(converted_dir, target_dir, original_dir, out, cfg, direction, model_name);
    } else if (*exportf) {
      mc::CmdExportFeatures(in_wav, out, cfg, feature_file);
    } else if (*toy) {
      mc::CmdMakeToyCorpus(root, cfg.train.seed, train_per_attribute, test_pairs);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json r = {{"command", command}, {"error", "usage"}, {"message", e.what()}};
    std::cerr << r.dump() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << mc::ErrorRecord(command, e).dump() << std::endl;
    return 1;
  }
  return 0;
}
