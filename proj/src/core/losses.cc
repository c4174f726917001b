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

#include "mass/core/losses.h"

#include <cmath>
#include <sstream>
#include <string>

namespace mass::core {
namespace {

struct Term {
  double value;
  double dlogit;
};

// -log(sigmoid(logit)) with the probability clamped; zero slope when clamped.
Term NegLogSigmoid(double logit) {
  const double p = Sigmoid(logit);
  if (p < kProbabilityClamp) return {-std::log(kProbabilityClamp), 0.0};
  if (p > 1.0 - kProbabilityClamp) return {-std::log1p(-kProbabilityClamp), 0.0};
  return {-std::log(p), p - 1.0};
}

// -log(1 - sigmoid(logit)).
Term NegLogOneMinusSigmoid(double logit) {
  const Term t = NegLogSigmoid(-logit);
  return {t.value, -t.dlogit};
}

struct ClassTerm {
  double value;
  Eigen::VectorXd dlogits;
};

ClassTerm NegLogSoftmax(const Eigen::VectorXd& logits, int label) {
  const Eigen::VectorXd p = Softmax(logits);
  const double pc = p(label);
  if (pc < kProbabilityClamp) {
    return {-std::log(kProbabilityClamp), Eigen::VectorXd::Zero(logits.size())};
  }
  if (pc > 1.0 - kProbabilityClamp) {
    return {-std::log1p(-kProbabilityClamp), Eigen::VectorXd::Zero(logits.size())};
  }
  Eigen::VectorXd d = p;
  d(label) -= 1.0;
  return {-std::log(pc), d};
}

// Per-element mean of |a - b|^rho and its gradient with respect to a.
double ReconstructionError(const FrameMatrix& a, const FrameMatrix& b, int rho,
                           FrameMatrix* grad) {
  const double n = static_cast<double>(a.size());
  const FrameMatrix diff = a - b;
  if (rho == 1) {
    if (grad) *grad = diff.array().sign().matrix() / n;
    return diff.cwiseAbs().sum() / n;
  }
  if (grad) *grad = diff * (2.0 / n);
  return diff.squaredNorm() / n;
}

void CheckFinite(double value, const char* loss, size_t item, const std::string& detail) {
  if (std::isfinite(value)) return;
  std::ostringstream msg;
  msg << loss << ": non-finite value at batch item " << item << " (" << detail << ")";
  throw NumericalError(msg.str());
}

std::string Describe(const char* what, double v) {
  std::ostringstream s;
  s << what << "=" << v;
  return s.str();
}

const Networks& Nets(const ConversionModel& model, const Batch& batch) {
  batch.Validate(model.config.num_classes);
  return NetworksFor(model.config);
}

}  // namespace

void LossWeights::Validate() const {
  for (double w : {adv, cls, cyc, id}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("loss weights must be nonnegative");
  }
  if (rho != 1 && rho != 2) throw ParameterError("rho must be 1 or 2");
}

void Batch::Validate(int num_classes) const {
  if (mcc.empty()) throw ParameterError("empty batch");
  if (source.size() != mcc.size() || target.size() != mcc.size()) {
    throw ParameterError("batch label counts do not match the number of segments");
  }
  for (size_t i = 0; i < mcc.size(); ++i) {
    AttributeLabel(source[i], num_classes);
    AttributeLabel(target[i], num_classes);
  }
}

bool LossReport::AllFinite() const {
  for (double v : {adv_d, adv_g, cls_c, cls_g, cyc, id, total_g, total_d, total_c}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double LossAdvD(const ConversionModel& model, const Batch& batch, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    EncoderTape real_tape;
    const double real_logit =
        nets.discriminator.Logit(model.discriminator, batch.mcc[i], batch.source[i], &real_tape);
    const Term real = NegLogSigmoid(real_logit);
    CheckFinite(real.value, "loss_adv_d", i, Describe("D(real) logit", real_logit));

    const FrameMatrix fake =
        nets.generator.Forward(model.generator, batch.mcc[i], batch.target[i], nullptr);
    EncoderTape fake_tape;
    const double fake_logit =
        nets.discriminator.Logit(model.discriminator, fake, batch.target[i], &fake_tape);
    const Term fake_term = NegLogOneMinusSigmoid(fake_logit);
    CheckFinite(fake_term.value, "loss_adv_d", i, Describe("D(fake) logit", fake_logit));

    total += real.value + fake_term.value;
    if (grads) {
      nets.discriminator.Backward(model.discriminator, real_tape, real.dlogit * scale,
                                  &grads->discriminator);
      nets.discriminator.Backward(model.discriminator, fake_tape, fake_term.dlogit * scale,
                                  &grads->discriminator);
    }
  }
  return total * scale;
}

double LossAdvG(const ConversionModel& model, const Batch& batch, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    GeneratorTape g_tape;
    const FrameMatrix fake =
        nets.generator.Forward(model.generator, batch.mcc[i], batch.target[i], &g_tape);
    EncoderTape d_tape;
    const double logit = nets.discriminator.Logit(model.discriminator, fake, batch.target[i], &d_tape);
    const Term term = NegLogSigmoid(logit);
    CheckFinite(term.value, "loss_adv_g", i, Describe("D(fake) logit", logit));
    total += term.value;
    if (grads) {
      const FrameMatrix d_fake =
          nets.discriminator.Backward(model.discriminator, d_tape, term.dlogit * scale, nullptr);
      nets.generator.Backward(model.generator, g_tape, d_fake, &grads->generator);
    }
  }
  return total * scale;
}

double LossClsC(const ConversionModel& model, const Batch& batch, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    EncoderTape tape;
    const Eigen::VectorXd logits = nets.classifier.Logits(model.classifier, batch.mcc[i], &tape);
    const ClassTerm term = NegLogSoftmax(logits, batch.source[i]);
    CheckFinite(term.value, "loss_cls_c", i, Describe("max |logit|", logits.cwiseAbs().maxCoeff()));
    total += term.value;
    if (grads) {
      nets.classifier.Backward(model.classifier, tape, term.dlogits * scale, &grads->classifier);
    }
  }
  return total * scale;
}

double LossClsG(const ConversionModel& model, const Batch& batch, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    GeneratorTape g_tape;
    const FrameMatrix fake =
        nets.generator.Forward(model.generator, batch.mcc[i], batch.target[i], &g_tape);
    EncoderTape c_tape;
    const Eigen::VectorXd logits = nets.classifier.Logits(model.classifier, fake, &c_tape);
    const ClassTerm term = NegLogSoftmax(logits, batch.target[i]);
    CheckFinite(term.value, "loss_cls_g", i, Describe("max |logit|", logits.cwiseAbs().maxCoeff()));
    total += term.value;
    if (grads) {
      const FrameMatrix d_fake =
          nets.classifier.Backward(model.classifier, c_tape, term.dlogits * scale, nullptr);
      nets.generator.Backward(model.generator, g_tape, d_fake, &grads->generator);
    }
  }
  return total * scale;
}

double LossCyc(const ConversionModel& model, const Batch& batch, int rho, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    GeneratorTape forward_tape, back_tape;
    const FrameMatrix fake =
        nets.generator.Forward(model.generator, batch.mcc[i], batch.target[i], &forward_tape);
    const FrameMatrix rec = nets.generator.Forward(model.generator, fake, batch.source[i], &back_tape);
    FrameMatrix d_rec;
    const double value = ReconstructionError(rec, batch.mcc[i], rho, grads ? &d_rec : nullptr);
    CheckFinite(value, "loss_cyc", i, Describe("max |G(G(x))|", rec.cwiseAbs().maxCoeff()));
    total += value;
    if (grads) {
      const FrameMatrix d_fake =
          nets.generator.Backward(model.generator, back_tape, d_rec * scale, &grads->generator);
      nets.generator.Backward(model.generator, forward_tape, d_fake, &grads->generator);
    }
  }
  return total * scale;
}

double LossId(const ConversionModel& model, const Batch& batch, int rho, ModelGradients* grads) {
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    GeneratorTape tape;
    const FrameMatrix same =
        nets.generator.Forward(model.generator, batch.mcc[i], batch.source[i], &tape);
    FrameMatrix d_same;
    const double value = ReconstructionError(same, batch.mcc[i], rho, grads ? &d_same : nullptr);
    CheckFinite(value, "loss_id", i, Describe("max |G(x)|", same.cwiseAbs().maxCoeff()));
    total += value;
    if (grads) nets.generator.Backward(model.generator, tape, d_same * scale, &grads->generator);
  }
  return total * scale;
}

LossReport TotalLosses(const ConversionModel& model, const Batch& batch,
                       const LossWeights& weights) {
  weights.Validate();
  LossReport r;
  r.adv_d = LossAdvD(model, batch);
  r.adv_g = LossAdvG(model, batch);
  r.cls_c = LossClsC(model, batch);
  r.cls_g = LossClsG(model, batch);
  r.cyc = LossCyc(model, batch, weights.rho);
  r.id = LossId(model, batch, weights.rho);
  r.total_g = weights.adv * r.adv_g + weights.cls * r.cls_g + weights.cyc * r.cyc +
              weights.id * r.id;
  r.total_d = r.adv_d;
  r.total_c = r.cls_c;
  return r;
}

LossReport DiscriminatorClassifierObjective(const ConversionModel& model, const Batch& batch,
                                            ModelGradients* grads) {
  LossReport r;
  r.adv_d = LossAdvD(model, batch, grads);
  r.cls_c = LossClsC(model, batch, grads);
  r.total_d = r.adv_d;
  r.total_c = r.cls_c;
  return r;
}

LossReport GeneratorObjective(const ConversionModel& model, const Batch& batch,
                              const LossWeights& weights, ModelGradients* grads) {
  weights.Validate();
  const Networks& nets = Nets(model, batch);
  const double scale = 1.0 / static_cast<double>(batch.size());
  Gradients* g_grads = grads ? &grads->generator : nullptr;
  LossReport r;
  for (size_t i = 0; i < batch.size(); ++i) {
    const FrameMatrix& x = batch.mcc[i];
    const int src = batch.source[i];
    const int tgt = batch.target[i];

    GeneratorTape fake_tape;
    const FrameMatrix fake = nets.generator.Forward(model.generator, x, tgt, &fake_tape);

    EncoderTape d_tape;
    const double logit = nets.discriminator.Logit(model.discriminator, fake, tgt, &d_tape);
    const Term adv = NegLogSigmoid(logit);
    CheckFinite(adv.value, "loss_adv_g", i, Describe("D(fake) logit", logit));

    EncoderTape c_tape;
    const Eigen::VectorXd logits = nets.classifier.Logits(model.classifier, fake, &c_tape);
    const ClassTerm cls = NegLogSoftmax(logits, tgt);
    CheckFinite(cls.value, "loss_cls_g", i, Describe("max |logit|", logits.cwiseAbs().maxCoeff()));

    GeneratorTape rec_tape;
    const FrameMatrix rec = nets.generator.Forward(model.generator, fake, src, &rec_tape);
    FrameMatrix d_rec;
    const double cyc = ReconstructionError(rec, x, weights.rho, &d_rec);
    CheckFinite(cyc, "loss_cyc", i, Describe("max |G(G(x))|", rec.cwiseAbs().maxCoeff()));

    GeneratorTape id_tape;
    const FrameMatrix same = nets.generator.Forward(model.generator, x, src, &id_tape);
    FrameMatrix d_same;
    const double id = ReconstructionError(same, x, weights.rho, &d_same);
    CheckFinite(id, "loss_id", i, Describe("max |G(x)|", same.cwiseAbs().maxCoeff()));

    r.adv_g += adv.value * scale;
    r.cls_g += cls.value * scale;
    r.cyc += cyc * scale;
    r.id += id * scale;
    if (!grads) continue;

    FrameMatrix d_fake = nets.discriminator.Backward(model.discriminator, d_tape,
                                                     weights.adv * adv.dlogit * scale, nullptr);
    d_fake += nets.classifier.Backward(model.classifier, c_tape,
                                       cls.dlogits * (weights.cls * scale), nullptr);
    d_fake += nets.generator.Backward(model.generator, rec_tape, d_rec * (weights.cyc * scale),
                                      g_grads);
    nets.generator.Backward(model.generator, fake_tape, d_fake, g_grads);
    if (weights.id > 0.0) {
      nets.generator.Backward(model.generator, id_tape, d_same * (weights.id * scale), g_grads);
    }
  }
  r.total_g = weights.adv * r.adv_g + weights.cls * r.cls_g + weights.cyc * r.cyc +
              weights.id * r.id;
  return r;
}

}  // namespace mass::core
