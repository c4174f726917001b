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
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mass/core/losses.h"
#include "mass/training/dataset.h"

namespace mass::training {

struct TrainConfig {
  int steps = 20000;
  int batch_size = 8;
  int segment_frames = 128;
  double lr_g = 2e-4;
  double lr_dc = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  core::LossWeights weights;
  uint64_t seed = 0;
  int d_steps_per_g_step = 1;
  int checkpoint_every = 1000;

  void Validate() const;
};

// Normalised MCC of every training utterance held in memory.
struct TrainingSet {
  std::vector<FrameMatrix> mcc;
  std::vector<int> attribute;
  int num_classes = 0;

  static TrainingSet FromIndex(const DatasetIndex& index);
};

// Uniform utterance, uniform segment start and a target drawn uniformly
// over all K attributes (the source's own included). Utterances shorter than
// the segment are padded by repeating their edge frames on both sides.
core::Batch SampleMinibatch(const TrainingSet& data, const TrainConfig& cfg, std::mt19937_64& rng);

// Adaptive-moment optimiser. Parameters and moments are kept at float32
// precision after each update so checkpoints resume bit-exactly.
class Adam {
 public:
  Adam() = default;
  Adam(const core::ParameterSet& params, double lr, double beta1, double beta2,
       double eps = 1e-8);

  void Step(core::ParameterSet& params, const core::Gradients& grads);

  long step() const { return t_; }
  core::ParameterSet& first_moment() { return m_; }
  core::ParameterSet& second_moment() { return v_; }
  const core::ParameterSet& first_moment() const { return m_; }
  const core::ParameterSet& second_moment() const { return v_; }
  void set_step(long t) { t_ = t; }

 private:
  double lr_ = 0, beta1_ = 0, beta2_ = 0, eps_ = 0;
  long t_ = 0;
  core::ParameterSet m_;
  core::ParameterSet v_;
};

struct Optimizers {
  Optimizers() = default;
  Optimizers(const core::ConversionModel& model, const TrainConfig& cfg);
  Adam generator;
  Adam discriminator;
  Adam classifier;
};

// One discriminator/classifier update (per configured ratio) followed by one
// generator update. The returned report holds the losses evaluated before
// the respective updates.
core::LossReport TrainStep(core::ConversionModel& model, Optimizers& opt, const TrainingSet& data,
                           const TrainConfig& cfg, std::mt19937_64& rng);

struct TrainOptions {
  std::filesystem::path checkpoint_path;  // empty: no checkpoints
  std::filesystem::path log_path;         // empty: no log
  std::filesystem::path resume_from;      // empty: fresh start
  std::function<void(int, const core::LossReport&)> on_step;
  std::map<std::string, std::string> metadata;  // stored in the model file
};

class Trainer {
 public:
  Trainer(core::ConversionModel model, TrainingSet data, TrainConfig cfg);
  // Restores model, optimiser moments, step count and RNG state.
  static Trainer Resume(const std::filesystem::path& checkpoint, TrainingSet data,
                        TrainConfig cfg);

  core::LossReport Step();
  void SaveCheckpoint(const std::filesystem::path& path) const;

  int step() const { return step_; }
  const core::ConversionModel& model() const { return model_; }
  const TrainConfig& config() const { return cfg_; }

 private:
  core::ConversionModel model_;
  TrainingSet data_;
  TrainConfig cfg_;
  Optimizers opt_;
  std::mt19937_64 rng_;
  int step_ = 0;
};

// Fresh model with the index statistics embedded, trained for cfg.steps.
core::ConversionModel TrainModel(const DatasetIndex& index, const core::NetworkConfig& net,
                                 const TrainConfig& cfg, const TrainOptions& options = {});

nlohmann::json LossReportToJson(int step, const core::LossReport& r, double wall_ms);

}  // namespace mass::training
