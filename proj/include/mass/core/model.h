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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mass/core/networks.h"
#include "mass/features/f0.h"

namespace mass::core {

class AttributeLabel {
 public:
  // Throws ParameterError unless 0 <= index < num_classes.
  AttributeLabel(int index, int num_classes);

  int index() const { return index_; }
  int num_classes() const { return num_classes_; }
  Eigen::VectorXd OneHot() const;

 private:
  int index_;
  int num_classes_;
};

struct ConversionModel {
  NetworkConfig config;
  std::vector<std::string> attribute_names;
  ParameterSet generator;
  ParameterSet discriminator;
  ParameterSet classifier;
  Eigen::VectorXd feature_mean = Eigen::VectorXd::Zero(kMccDim);
  Eigen::VectorXd feature_std = Eigen::VectorXd::Ones(kMccDim);
  std::vector<features::F0Statistics> f0_stats;
  // Free-form string annotations, e.g. "corpus_speaker".
  std::map<std::string, std::string> metadata;

  void Validate() const;
  // Index of the named attribute; ParameterError listing the known names
  // otherwise.
  int AttributeIndex(const std::string& name) const;
  AttributeLabel Label(const std::string& name) const;

  FrameMatrix Normalize(const FrameMatrix& mcc) const;
  FrameMatrix Denormalize(const FrameMatrix& normalized) const;
};

// Randomly initialised model with identity normalisation and unit F0
// statistics. The generator output convolution starts at a tenth of its
// initial scale so a fresh generator stays close to the identity.
ConversionModel CreateModel(const NetworkConfig& config, std::vector<std::string> attribute_names,
                            uint64_t seed);

// Model-level passes on raw (denormalised) MCC.
FrameMatrix GeneratorForward(const ConversionModel& model, const FrameMatrix& mcc,
                             const AttributeLabel& target);
double DiscriminatorForward(const ConversionModel& model, const FrameMatrix& mcc,
                            const AttributeLabel& attr);
Eigen::VectorXd ClassifierForward(const ConversionModel& model, const FrameMatrix& mcc);

// Extra named tensor groups and JSON state stored alongside a model, used by
// training checkpoints.
struct ModelFileExtras {
  std::map<std::string, ParameterSet> groups;
  nlohmann::json state = nlohmann::json::object();
};

inline constexpr char kModelMagic[8] = {'M', 'A', 'S', 'S', 'M', 'O', 'D', 'L'};
inline constexpr int kModelFormatVersion = 1;

// Layout: magic, u32 manifest length, JSON manifest, float32 LE payloads in
// manifest order. Parameters are held at float32 precision, so a round trip
// is exact.
void SaveModel(const ConversionModel& model, const std::filesystem::path& path,
               const ModelFileExtras* extras = nullptr);
ConversionModel LoadModel(const std::filesystem::path& path, ModelFileExtras* extras = nullptr);

nlohmann::json NetworkConfigToJson(const NetworkConfig& config);
NetworkConfig NetworkConfigFromJson(const nlohmann::json& j);

}  // namespace mass::core
