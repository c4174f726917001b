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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mass/cli/run_config.h"

namespace mass::cli {

namespace fs = std::filesystem;

// Every command writes <output>.manifest.json next to its main output: the
// command, its inputs, the resolved config, its hash, the seed and the tool
// version. Manifests carry no timestamps so identical runs match byte for
// byte.

// Feature cache: config cache_dir, else $MASS_CACHE_DIR, else <root>/.mass_cache.
void CmdIngest(const fs::path& root, const fs::path& out_index, const RunConfig& cfg);

struct TrainPaths {
  fs::path checkpoint;
  fs::path log;
  fs::path resume;
};

void CmdTrain(const fs::path& index, const fs::path& out_model, const RunConfig& cfg,
              const TrainPaths& paths = {});

void CmdConvert(const fs::path& model, const fs::path& in_wav, const std::string& source_label,
                const std::string& target_label, const fs::path& out_wav, const RunConfig& cfg);

// Exactly one of `text` and `wav` is set. Text goes through the TTS adapter:
// cfg.tts_command, or a JSON table {text: wav path} given as `tts_table`.
struct SynthesizeRequest {
  std::string text;
  fs::path wav;
  fs::path tts_table;
  fs::path trace;  // optional JSON trace output
};

void CmdSynthesize(const SynthesizeRequest& request, const fs::path& out_wav, const RunConfig& cfg);

// Pairs are matched by file stem across the three directories (wav or
// .massfeat). Writes the JSON report to out_report and the text table to
// out_report with a .txt extension.
void CmdEvaluate(const fs::path& converted_dir, const fs::path& target_dir,
                 const fs::path& original_dir, const fs::path& out_report, const RunConfig& cfg,
                 const std::string& direction = "source-to-target",
                 const std::string& model_name = "Converted");

// Spectral summary CSV of one recording; with `feature_file`, the analysed
// features are also stored in MASSFEAT form.
void CmdExportFeatures(const fs::path& wav, const fs::path& out_csv, const RunConfig& cfg,
                       const fs::path& feature_file = {});

void CmdMakeToyCorpus(const fs::path& dir, uint64_t seed, int train_per_attribute, int test_pairs);

// Single-line error record written to stderr on failure.
nlohmann::json ErrorRecord(const std::string& command, const std::exception& e);

fs::path ManifestPath(const fs::path& output);

}  // namespace mass::cli
