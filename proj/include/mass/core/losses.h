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

#include <vector>

#include "mass/core/model.h"

// Training objectives. All losses are batch means computed on z-normalised
// MCC. When `grads` is given, the gradient of the returned value is added to
// it; only the networks a term is meant to train receive gradients, the
// others are treated as constants.
namespace mass::core {

// Probabilities are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
// inside every logarithm.
inline constexpr double kProbabilityClamp = 1e-7;

struct LossWeights {
  double adv = 1.0;
  double cls = 1.0;
  double cyc = 0.5;
  double id = 0.25;
  int rho = 1;  // 1: mean absolute error, 2: mean squared error

  void Validate() const;
};

struct Batch {
  std::vector<FrameMatrix> mcc;  // normalised segments
  std::vector<int> source;       // attribute of each segment
  std::vector<int> target;       // sampled conversion target

  size_t size() const { return mcc.size(); }
  void Validate(int num_classes) const;
};

struct ModelGradients {
  explicit ModelGradients(const ConversionModel& model)
      : generator(model.generator),
        discriminator(model.discriminator),
        classifier(model.classifier) {}

  void SetZero() {
    generator.SetZero();
    discriminator.SetZero();
    classifier.SetZero();
  }

  Gradients generator;
  Gradients discriminator;
  Gradients classifier;
};

// -mean log D(y, c_y) - mean log(1 - D(G(x, c), c)). Trains D.
double LossAdvD(const ConversionModel& model, const Batch& batch, ModelGradients* grads = nullptr);
// -mean log D(G(x, c), c). Trains G.
double LossAdvG(const ConversionModel& model, const Batch& batch, ModelGradients* grads = nullptr);
// -mean log C(c_y | y). Trains C.
double LossClsC(const ConversionModel& model, const Batch& batch, ModelGradients* grads = nullptr);
// -mean log C(c | G(x, c)). Trains G.
double LossClsG(const ConversionModel& model, const Batch& batch, ModelGradients* grads = nullptr);
// mean |G(G(x, c), c_x) - x|^rho per element. Trains G.
double LossCyc(const ConversionModel& model, const Batch& batch, int rho,
               ModelGradients* grads = nullptr);
// mean |G(x, c_x) - x|^rho per element. Trains G.
double LossId(const ConversionModel& model, const Batch& batch, int rho,
              ModelGradients* grads = nullptr);

struct LossReport {
  double adv_d = 0, adv_g = 0, cls_c = 0, cls_g = 0, cyc = 0, id = 0;
  double total_g = 0, total_d = 0, total_c = 0;

  bool AllFinite() const;
};

// Evaluates all six terms; total_g is the weighted generator sum, total_d
// the adversarial discriminator term and total_c the classifier term.
LossReport TotalLosses(const ConversionModel& model, const Batch& batch,
                       const LossWeights& weights);

// Discriminator and classifier terms with their gradients.
LossReport DiscriminatorClassifierObjective(const ConversionModel& model, const Batch& batch,
                                            ModelGradients* grads);
// Generator terms and the gradient of total_g, sharing G(x, c) between the
// adversarial, classification and cycle terms.
LossReport GeneratorObjective(const ConversionModel& model, const Batch& batch,
                              const LossWeights& weights, ModelGradients* grads);

}  // namespace mass::core
