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

#include "mass/core/model.h"

#include <cmath>
#include <random>
#include <string_view>

#include "mass/binary_io.h"

namespace mass::core {
namespace {

using nlohmann::json;

constexpr double kOutputInitScale = 0.1;
const char* const kNetworkGroups[] = {"generator", "discriminator", "classifier"};

json StatsToJson(const features::F0Statistics& s) {
  return {{"mean_log_f0", s.mean_log_f0},
          {"std_log_f0", s.std_log_f0},
          {"n_voiced_frames", s.n_voiced_frames}};
}

features::F0Statistics StatsFromJson(const json& j) {
  features::F0Statistics s;
  s.mean_log_f0 = j.at("mean_log_f0").get<double>();
  s.std_log_f0 = j.at("std_log_f0").get<double>();
  s.n_voiced_frames = j.at("n_voiced_frames").get<long>();
  return s;
}

json VectorToJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Tensor table entries for one group, appending payloads to `payload`.
void WriteGroup(const std::string& group, const ParameterSet& params, json& table,
                std::string& payload) {
  for (const auto& p : params) {
    const size_t offset = payload.size();
    for (double v : p.value) AppendLe<float>(payload, static_cast<float>(v));
    table.push_back({{"group", group},
                     {"name", p.name},
                     {"shape", p.shape},
                     {"offset", offset},
                     {"count", p.value.size()}});
  }
}

}  // namespace

AttributeLabel::AttributeLabel(int index, int num_classes)
    : index_(index), num_classes_(num_classes) {
  if (num_classes < 1 || index < 0 || index >= num_classes) {
    throw ParameterError("attribute index " + std::to_string(index) + " outside [0, " +
                         std::to_string(num_classes) + ")");
  }
}

Eigen::VectorXd AttributeLabel::OneHot() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(num_classes_);
  v(index_) = 1.0;
  return v;
}

void ConversionModel::Validate() const {
  config.Validate();
  if (static_cast<int>(attribute_names.size()) != config.num_classes) {
    throw ParameterError("model has " + std::to_string(attribute_names.size()) +
                         " attribute names for " + std::to_string(config.num_classes) +
                         " classes");
  }
  if (static_cast<int>(f0_stats.size()) != config.num_classes) {
    throw ParameterError("model needs one F0 statistics record per attribute");
  }
  if (feature_mean.size() != kMccDim || feature_std.size() != kMccDim) {
    throw ParameterError("feature statistics must have 36 entries");
  }
  if (!feature_mean.allFinite() || !feature_std.allFinite() || (feature_std.array() <= 0).any()) {
    throw ParameterError("feature_std must be positive and statistics finite");
  }
  const Networks& nets = NetworksFor(config);
  nets.generator.CheckParameters(generator);
  nets.discriminator.CheckParameters(discriminator);
  nets.classifier.CheckParameters(classifier);
}

int ConversionModel::AttributeIndex(const std::string& name) const {
  for (size_t i = 0; i < attribute_names.size(); ++i) {
    if (attribute_names[i] == name) return static_cast<int>(i);
  }
  std::string known;
  for (const auto& n : attribute_names) known += (known.empty() ? "" : ", ") + n;
  throw ParameterError("unknown attribute '" + name + "' (model knows: " + known + ")");
}

AttributeLabel ConversionModel::Label(const std::string& name) const {
  return AttributeLabel(AttributeIndex(name), config.num_classes);
}

FrameMatrix ConversionModel::Normalize(const FrameMatrix& mcc) const {
  FrameMatrix out(mcc.rows(), mcc.cols());
  for (Eigen::Index t = 0; t < mcc.rows(); ++t) {
    out.row(t) = (mcc.row(t) - feature_mean.transpose()).cwiseQuotient(feature_std.transpose());
  }
  return out;
}

FrameMatrix ConversionModel::Denormalize(const FrameMatrix& normalized) const {
  FrameMatrix out(normalized.rows(), normalized.cols());
  for (Eigen::Index t = 0; t < normalized.rows(); ++t) {
    out.row(t) =
        normalized.row(t).cwiseProduct(feature_std.transpose()) + feature_mean.transpose();
  }
  return out;
}

ConversionModel CreateModel(const NetworkConfig& config, std::vector<std::string> attribute_names,
                            uint64_t seed) {
  ConversionModel m;
  m.config = config;
  m.attribute_names = std::move(attribute_names);
  const Networks& nets = NetworksFor(config);
  m.generator = nets.generator.layout();
  m.discriminator = nets.discriminator.layout();
  m.classifier = nets.classifier.layout();
  m.f0_stats.assign(m.attribute_names.size(), features::F0Statistics{0.0, 1.0, 0});

  std::mt19937_64 rng(seed);
  InitializeParameters(m.generator, rng);
  InitializeParameters(m.discriminator, rng);
  InitializeParameters(m.classifier, rng);
  for (double& v : m.generator[m.generator.Find("out/weight")].value) v *= kOutputInitScale;
  RoundToFloat(m.generator);
  RoundToFloat(m.discriminator);
  RoundToFloat(m.classifier);
  m.Validate();
  return m;
}

FrameMatrix GeneratorForward(const ConversionModel& model, const FrameMatrix& mcc,
                             const AttributeLabel& target) {
  if (target.index() >= model.config.num_classes) {
    throw ParameterError("target index " + std::to_string(target.index()) + " outside [0, " +
                         std::to_string(model.config.num_classes) + ")");
  }
  const GeneratorNet& net = NetworksFor(model.config).generator;
  return model.Denormalize(net.Forward(model.generator, model.Normalize(mcc), target.index(),
                                       nullptr));
}

double DiscriminatorForward(const ConversionModel& model, const FrameMatrix& mcc,
                            const AttributeLabel& attr) {
  if (attr.index() >= model.config.num_classes) {
    throw ParameterError("attribute index " + std::to_string(attr.index()) + " outside [0, " +
                         std::to_string(model.config.num_classes) + ")");
  }
  const DiscriminatorNet& net = NetworksFor(model.config).discriminator;
  return Sigmoid(net.Logit(model.discriminator, model.Normalize(mcc), attr.index(), nullptr));
}

Eigen::VectorXd ClassifierForward(const ConversionModel& model, const FrameMatrix& mcc) {
  const ClassifierNet& net = NetworksFor(model.config).classifier;
  return Softmax(net.Logits(model.classifier, model.Normalize(mcc), nullptr));
}

json NetworkConfigToJson(const NetworkConfig& c) {
  return {{"generator_blocks", c.generator_blocks},
          {"discriminator_blocks", c.discriminator_blocks},
          {"classifier_blocks", c.classifier_blocks},
          {"base_channels", c.base_channels},
          {"num_classes", c.num_classes},
          {"input_dim", c.input_dim}};
}

NetworkConfig NetworkConfigFromJson(const json& j) {
  NetworkConfig c;
  c.generator_blocks = j.at("generator_blocks").get<int>();
  c.discriminator_blocks = j.at("discriminator_blocks").get<int>();
  c.classifier_blocks = j.at("classifier_blocks").get<int>();
  c.base_channels = j.at("base_channels").get<int>();
  c.num_classes = j.at("num_classes").get<int>();
  c.input_dim = j.at("input_dim").get<int>();
  return c;
}

void SaveModel(const ConversionModel& model, const std::filesystem::path& path,
               const ModelFileExtras* extras) {
  model.Validate();
  json manifest;
  manifest["format_version"] = kModelFormatVersion;
  manifest["config"] = NetworkConfigToJson(model.config);
  manifest["attribute_names"] = model.attribute_names;
  manifest["feature_mean"] = VectorToJson(model.feature_mean);
  manifest["feature_std"] = VectorToJson(model.feature_std);
  manifest["f0_stats"] = json::array();
  for (const auto& s : model.f0_stats) manifest["f0_stats"].push_back(StatsToJson(s));
  manifest["metadata"] = model.metadata;

  std::string payload;
  json table = json::array();
  WriteGroup("generator", model.generator, table, payload);
  WriteGroup("discriminator", model.discriminator, table, payload);
  WriteGroup("classifier", model.classifier, table, payload);
  if (extras) {
    for (const auto& [group, params] : extras->groups) WriteGroup(group, params, table, payload);
    manifest["state"] = extras->state;
  }
  manifest["tensors"] = std::move(table);

  const std::string text = manifest.dump();
  std::string out(kModelMagic, sizeof(kModelMagic));
  AppendLe<uint32_t>(out, static_cast<uint32_t>(text.size()));
  out += text;
  out += payload;
  WriteFileAtomic(path.string(), out);
}

ConversionModel LoadModel(const std::filesystem::path& path, ModelFileExtras* extras) {
  const std::string where = path.string();
  const std::string bytes = ReadFileBytes(where);
  ByteReader in(bytes, where);
  if (in.ReadBytes(sizeof(kModelMagic)) != std::string_view(kModelMagic, sizeof(kModelMagic))) {
    throw FormatError(where + ": bad magic, not a MASSMODL file");
  }
  const auto manifest_len = in.Read<uint32_t>();
  json manifest;
  try {
    manifest = json::parse(in.ReadBytes(manifest_len));
  } catch (const json::parse_error& e) {
    throw FormatError(where + ": unreadable manifest: " + e.what());
  }
  const std::string_view payload = std::string_view(bytes).substr(bytes.size() - in.remaining());

  try {
    const int version = manifest.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw VersionError(where + ": model format version " + std::to_string(version) +
                         ", expected " + std::to_string(kModelFormatVersion));
    }
    ConversionModel m;
    m.config = NetworkConfigFromJson(manifest.at("config"));
    m.config.Validate();
    m.attribute_names = manifest.at("attribute_names").get<std::vector<std::string>>();
    m.feature_mean = VectorFromJson(manifest.at("feature_mean"));
    m.feature_std = VectorFromJson(manifest.at("feature_std"));
    for (const auto& s : manifest.at("f0_stats")) m.f0_stats.push_back(StatsFromJson(s));
    m.metadata = manifest.at("metadata").get<std::map<std::string, std::string>>();

    std::map<std::string, ParameterSet> groups;
    size_t expected_offset = 0;
    for (const auto& entry : manifest.at("tensors")) {
      const auto offset = entry.at("offset").get<size_t>();
      const auto count = entry.at("count").get<size_t>();
      const auto shape = entry.at("shape").get<std::vector<int>>();
      size_t shape_count = 1;
      for (int d : shape) shape_count *= static_cast<size_t>(d);
      if (offset != expected_offset || shape_count != count || offset + 4 * count > payload.size()) {
        throw FormatError(where + ": tensor table inconsistent at " +
                          entry.at("name").get<std::string>());
      }
      expected_offset = offset + 4 * count;
      ParameterSet& set = groups[entry.at("group").get<std::string>()];
      Parameter& p = set[set.Add(entry.at("name").get<std::string>(), shape)];
      ByteReader values(payload.substr(offset, 4 * count), where);
      for (double& v : p.value) v = values.Read<float>();
    }
    if (expected_offset != payload.size()) throw FormatError(where + ": payload size mismatch");

    for (const char* name : kNetworkGroups) {
      auto it = groups.find(name);
      if (it == groups.end()) throw FormatError(where + ": missing " + name + " tensors");
    }
    m.generator = std::move(groups["generator"]);
    m.discriminator = std::move(groups["discriminator"]);
    m.classifier = std::move(groups["classifier"]);
    for (const char* name : kNetworkGroups) groups.erase(name);
    try {
      m.Validate();
    } catch (const ParameterError& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (extras) {
      extras->groups = std::move(groups);
      extras->state = manifest.value("state", json::object());
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(where + ": malformed manifest: " + e.what());
  }
}

}  // namespace mass::core
