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
#include "mass/features/analysis.h"
#include "mass/features/f0.h"

namespace mass::training {

struct DatasetEntry {
  std::string id;  // "<attribute>/<file stem>"
  int attribute = 0;
  std::filesystem::path feature_path;
  int frames = 0;
};

struct DatasetIndex {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> attribute_names;
  Eigen::VectorXd mcc_mean;
  Eigen::VectorXd mcc_std;
  std::vector<features::F0Statistics> f0_stats;  // one per attribute
  features::AnalysisConfig analysis;

  int num_classes() const { return static_cast<int>(attribute_names.size()); }
  // Structural checks; with `check_files` every feature file is also parsed.
  void Validate(bool check_files = false) const;
};

struct IngestOptions {
  std::filesystem::path cache_dir;  // defaults to <root>/.mass_cache
  int jobs = 1;
};

struct IngestReport {
  int extracted = 0;
  int cache_hits = 0;
  int skipped = 0;
  std::vector<std::string> warnings;
};

// Scans root/<attribute>/<*.wav> (attributes in lexicographic order),
// extracts or reuses cached features and computes corpus statistics.
// Cache files are keyed by the SHA-256 of the audio bytes and the analysis
// settings; a cache directory inside root is not taken as an attribute.
// Unreadable files are skipped with a warning.
DatasetIndex IngestDataset(const std::filesystem::path& root, const features::AnalysisConfig& cfg,
                           const IngestOptions& options = {}, IngestReport* report = nullptr);

nlohmann::json IndexToJson(const DatasetIndex& index);
DatasetIndex IndexFromJson(const nlohmann::json& j);
void WriteIndex(const DatasetIndex& index, const std::filesystem::path& path);
DatasetIndex ReadIndex(const std::filesystem::path& path);

// Cache key of one recording under an analysis configuration.
std::string FeatureCacheKey(const std::filesystem::path& wav, const features::AnalysisConfig& cfg);

}  // namespace mass::training
