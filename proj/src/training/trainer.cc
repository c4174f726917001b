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

#include "mass/training/trainer.h"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "mass/features/feature_file.h"

namespace mass::training {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double ToFloat(double v) { return static_cast<double>(static_cast<float>(v)); }

core::ParameterSet ZerosLike(const core::ParameterSet& params) {
  core::ParameterSet out = params;
  for (auto& p : out) std::fill(p.value.begin(), p.value.end(), 0.0);
  return out;
}

// Copies `frames` rows starting at `start`, repeating the first/last row for
// positions outside the utterance.
FrameMatrix Segment(const FrameMatrix& mcc, int start, int frames) {
  FrameMatrix out(frames, mcc.cols());
  const int last = static_cast<int>(mcc.rows()) - 1;
  for (int t = 0; t < frames; ++t) out.row(t) = mcc.row(std::clamp(start + t, 0, last));
  return out;
}

std::string RngState(const std::mt19937_64& rng) {
  std::ostringstream s;
  s << rng;
  return s.str();
}

void RestoreRng(std::mt19937_64& rng, const std::string& state) {
  std::istringstream s(state);
  s >> rng;
  if (!s) throw FormatError("checkpoint has an unreadable RNG state");
}

}  // namespace

void TrainConfig::Validate() const {
  if (steps < 0) throw ParameterError("steps must be nonnegative");
  if (batch_size < 1) throw ParameterError("batch_size must be positive");
  if (segment_frames < core::kMinFrames) {
    throw ParameterError("segment_frames must be at least " + std::to_string(core::kMinFrames));
  }
  if (!(lr_g >= 0) || !(lr_dc >= 0)) throw ParameterError("learning rates must be nonnegative");
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
    throw ParameterError("Adam betas must lie in [0, 1)");
  }
  if (d_steps_per_g_step < 1) throw ParameterError("d_steps_per_g_step must be positive");
  if (checkpoint_every < 1) throw ParameterError("checkpoint_every must be positive");
  weights.Validate();
}

TrainingSet TrainingSet::FromIndex(const DatasetIndex& index) {
  index.Validate();
  TrainingSet set;
  set.num_classes = index.num_classes();
  for (const auto& e : index.entries) {
    const auto feats = features::ReadFeatureFile(e.feature_path);
    FrameMatrix norm(feats.mcc.rows(), feats.mcc.cols());
    for (Eigen::Index t = 0; t < norm.rows(); ++t) {
      norm.row(t) = (feats.mcc.row(t) - index.mcc_mean.transpose()).cwiseQuotient(index.mcc_std.transpose());
    }
    set.mcc.push_back(std::move(norm));
    set.attribute.push_back(e.attribute);
  }
  return set;
}

core::Batch SampleMinibatch(const TrainingSet& data, const TrainConfig& cfg, std::mt19937_64& rng) {
  if (data.mcc.empty()) throw DatasetError("training set is empty");
  std::uniform_int_distribution<size_t> pick_utt(0, data.mcc.size() - 1);
  std::uniform_int_distribution<int> pick_target(0, data.num_classes - 1);
  const int seg = cfg.segment_frames;
  core::Batch batch;
  for (int i = 0; i < cfg.batch_size; ++i) {
    const size_t u = pick_utt(rng);
    const FrameMatrix& mcc = data.mcc[u];
    const int frames = static_cast<int>(mcc.rows());
    int start;
    if (frames >= seg) {
      start = std::uniform_int_distribution<int>(0, frames - seg)(rng);
    } else {
      start = -(seg - frames) / 2;
    }
    batch.mcc.push_back(Segment(mcc, start, seg));
    batch.source.push_back(data.attribute[u]);
    batch.target.push_back(pick_target(rng));
  }
  return batch;
}

Adam::Adam(const core::ParameterSet& params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(ZerosLike(params)), v_(ZerosLike(params)) {}

void Adam::Step(core::ParameterSet& params, const core::Gradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (int i = 0; i < params.size(); ++i) {
    auto& p = params[i].value;
    auto& m = m_[i].value;
    auto& v = v_[i].value;
    const auto& g = grads[i];
    for (size_t j = 0; j < p.size(); ++j) {
      m[j] = ToFloat(beta1_ * m[j] + (1.0 - beta1_) * g[j]);
      v[j] = ToFloat(beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j]);
      const double update = lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
      p[j] = ToFloat(p[j] - update);
    }
  }
}

Optimizers::Optimizers(const core::ConversionModel& model, const TrainConfig& cfg)
    : generator(model.generator, cfg.lr_g, cfg.beta1, cfg.beta2),
      discriminator(model.discriminator, cfg.lr_dc, cfg.beta1, cfg.beta2),
      classifier(model.classifier, cfg.lr_dc, cfg.beta1, cfg.beta2) {}

core::LossReport TrainStep(core::ConversionModel& model, Optimizers& opt, const TrainingSet& data,
                           const TrainConfig& cfg, std::mt19937_64& rng) {
  core::ModelGradients grads(model);
  core::LossReport dc;
  core::Batch batch;
  for (int k = 0; k < cfg.d_steps_per_g_step; ++k) {
    batch = SampleMinibatch(data, cfg, rng);
    grads.SetZero();
    dc = core::DiscriminatorClassifierObjective(model, batch, &grads);
    opt.discriminator.Step(model.discriminator, grads.discriminator);
    opt.classifier.Step(model.classifier, grads.classifier);
  }
  grads.SetZero();
  core::LossReport r = core::GeneratorObjective(model, batch, cfg.weights, &grads);
  opt.generator.Step(model.generator, grads.generator);
  r.adv_d = dc.adv_d;
  r.cls_c = dc.cls_c;
  r.total_d = dc.total_d;
  r.total_c = dc.total_c;
  if (!r.AllFinite()) throw NumericalError("non-finite loss during training step");
  return r;
}

Trainer::Trainer(core::ConversionModel model, TrainingSet data, TrainConfig cfg)
    : model_(std::move(model)), data_(std::move(data)), cfg_(cfg), rng_(cfg.seed) {
  cfg_.Validate();
  model_.Validate();
  if (data_.num_classes != model_.config.num_classes) {
    throw ParameterError("training set has " + std::to_string(data_.num_classes) +
                         " attributes, model expects " + std::to_string(model_.config.num_classes));
  }
  opt_ = Optimizers(model_, cfg_);
}

core::LossReport Trainer::Step() {
  const core::LossReport r = TrainStep(model_, opt_, data_, cfg_, rng_);
  ++step_;
  return r;
}

void Trainer::SaveCheckpoint(const fs::path& path) const {
  core::ModelFileExtras extras;
  extras.groups["adam_m/generator"] = opt_.generator.first_moment();
  extras.groups["adam_v/generator"] = opt_.generator.second_moment();
  extras.groups["adam_m/discriminator"] = opt_.discriminator.first_moment();
  extras.groups["adam_v/discriminator"] = opt_.discriminator.second_moment();
  extras.groups["adam_m/classifier"] = opt_.classifier.first_moment();
  extras.groups["adam_v/classifier"] = opt_.classifier.second_moment();
  extras.state = {{"step", step_},
                  {"adam_steps", {opt_.generator.step(), opt_.discriminator.step(), opt_.classifier.step()}},
                  {"rng", RngState(rng_)}};
  core::SaveModel(model_, path, &extras);
}

Trainer Trainer::Resume(const fs::path& checkpoint, TrainingSet data, TrainConfig cfg) {
  core::ModelFileExtras extras;
  core::ConversionModel model = core::LoadModel(checkpoint, &extras);
  Trainer t(std::move(model), std::move(data), cfg);
  try {
    auto restore = [&](Adam& adam, const std::string& name, long steps) {
      adam.first_moment() = extras.groups.at("adam_m/" + name);
      adam.second_moment() = extras.groups.at("adam_v/" + name);
      adam.set_step(steps);
    };
    const auto steps = extras.state.at("adam_steps").get<std::vector<long>>();
    restore(t.opt_.generator, "generator", steps.at(0));
    restore(t.opt_.discriminator, "discriminator", steps.at(1));
    restore(t.opt_.classifier, "classifier", steps.at(2));
    t.step_ = extras.state.at("step").get<int>();
    RestoreRng(t.rng_, extras.state.at("rng").get<std::string>());
  } catch (const std::out_of_range&) {
    throw FormatError(checkpoint.string() + ": not a training checkpoint");
  } catch (const json::exception&) {
    throw FormatError(checkpoint.string() + ": not a training checkpoint");
  }
  return t;
}

json LossReportToJson(int step, const core::LossReport& r, double wall_ms) {
  return {{"step", step},       {"L_G", r.total_g},     {"L_D", r.total_d},   {"L_C", r.total_c},
          {"L_adv_g", r.adv_g}, {"L_adv_d", r.adv_d},   {"L_cls_c", r.cls_c}, {"L_cls_g", r.cls_g},
          {"L_cyc", r.cyc},     {"L_id", r.id},         {"wall_ms", wall_ms}};
}

core::ConversionModel TrainModel(const DatasetIndex& index, const core::NetworkConfig& net,
                                 const TrainConfig& cfg, const TrainOptions& options) {
  cfg.Validate();
  if (net.num_classes != index.num_classes()) {
    throw ParameterError("network configured for " + std::to_string(net.num_classes) +
                         " classes, dataset has " + std::to_string(index.num_classes()));
  }
  TrainingSet data = TrainingSet::FromIndex(index);

  std::optional<Trainer> trainer;
  if (!options.resume_from.empty()) {
    trainer.emplace(Trainer::Resume(options.resume_from, std::move(data), cfg));
  } else {
    core::ConversionModel model = core::CreateModel(net, index.attribute_names, cfg.seed);
    model.feature_mean = index.mcc_mean;
    model.feature_std = index.mcc_std;
    model.f0_stats = index.f0_stats;
    model.metadata = options.metadata;
    trainer.emplace(std::move(model), std::move(data), cfg);
  }

  std::ofstream log;
  if (!options.log_path.empty()) {
    log.open(options.log_path, trainer->step() > 0 ? std::ios::app : std::ios::trunc);
    if (!log) throw IoError("cannot open training log " + options.log_path.string());
  }
  bool have_checkpoint = !options.resume_from.empty();
  while (trainer->step() < cfg.steps) {
    const auto t0 = std::chrono::steady_clock::now();
    core::LossReport r;
    try {
      r = trainer->Step();
    } catch (const NumericalError& e) {
      std::string msg = std::string(e.what()) + " at step " + std::to_string(trainer->step() + 1);
      if (have_checkpoint) {
        msg += "; last good checkpoint: " +
               (options.checkpoint_path.empty() ? options.resume_from : options.checkpoint_path).string();
      }
      throw NumericalError(msg);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (log.is_open()) log << LossReportToJson(trainer->step(), r, ms).dump() << '\n';
    if (options.on_step) options.on_step(trainer->step(), r);
    if (!options.checkpoint_path.empty() &&
        (trainer->step() % cfg.checkpoint_every == 0 || trainer->step() == cfg.steps)) {
      trainer->SaveCheckpoint(options.checkpoint_path);
      have_checkpoint = true;
    }
  }
  return trainer->model();
}

}  // namespace mass::training
