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

#include "json.hpp"
#include "mass/core/networks.h"
#include "mass/features/analysis.h"
#include "mass/training/trainer.h"

namespace mass::cli {

inline constexpr char kVersion[] = "0.1.0";

// Flat key/value settings shared by every subcommand. Analysis keys use the
// AnalysisConfig field names; loss weights are lambda_adv, lambda_cls,
// lambda_cyc, lambda_id and rho.
struct RunConfig {
  features::AnalysisConfig analysis;
  training::TrainConfig train;

  std::string preset = "devc";  // devc | dsvc
  int base_channels = 16;
  // -1 keeps the preset's block count.
  int generator_blocks = -1;
  int discriminator_blocks = -1;
  int classifier_blocks = -1;

  int jobs = 1;
  std::string cache_dir;
  std::string corpus_speaker;

  std::string devc_model;
  std::string dsvc_model;
  std::string emotion;
  std::string speaker;
  std::string source_emotion;
  std::string source_speaker;
  std::string tts_command;
  std::string scratch_dir;

  int mcd_first = 1;
  int mcd_last = 24;

  // Unknown keys and ill-typed values raise ParameterError.
  static RunConfig FromJson(const nlohmann::json& j);
  static RunConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  void Validate() const;

  // Preset block counts with any explicit overrides applied.
  core::NetworkConfig Network(int num_classes) const;
};

// SHA-256 of the canonical JSON form.
std::string ConfigHash(const RunConfig& cfg);

}  // namespace mass::cli
