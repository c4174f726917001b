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

#include "mass/core/networks.h"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <string>

namespace mass::core {
namespace {

constexpr double kDiscriminatorSlope = 0.2;

void CheckFrames(const FrameMatrix& x, int input_dim) {
  if (x.cols() != input_dim) {
    throw InputError("expected " + std::to_string(input_dim) + " coefficients per frame, got " +
                     std::to_string(x.cols()));
  }
  if (x.rows() < kMinFrames) {
    throw InputError("sequence of " + std::to_string(x.rows()) + " frames is shorter than the " +
                     std::to_string(kMinFrames) + "-frame minimum");
  }
}

void CheckLabel(int label, int num_classes) {
  if (label < 0 || label >= num_classes) {
    throw ParameterError("attribute index " + std::to_string(label) + " outside [0, " +
                         std::to_string(num_classes) + ")");
  }
}

void CheckAgainstLayout(const ParameterSet& layout, const ParameterSet& params,
                        const char* what) {
  if (params.size() != layout.size()) {
    throw ParameterError(std::string(what) + ": expected " + std::to_string(layout.size()) +
                         " tensors, got " + std::to_string(params.size()));
  }
  for (int i = 0; i < layout.size(); ++i) {
    if (params[i].name != layout[i].name || params[i].shape != layout[i].shape ||
        params[i].value.size() != layout[i].value.size()) {
      throw ParameterError(std::string(what) + ": tensor " + std::to_string(i) + " (" +
                           params[i].name + ") does not match " + layout[i].name);
    }
  }
}

// Keeps only channel 0 of a (1 + K)-channel gradient.
Tensor FirstChannel(const Tensor& t) {
  Tensor out(1, t.height(), t.width());
  std::copy(t.data(), t.data() + t.plane(), out.data());
  return out;
}

}  // namespace

NetworkConfig NetworkConfig::Devc(int num_classes, int base_channels) {
  NetworkConfig c;
  c.generator_blocks = 6;
  c.discriminator_blocks = 2;
  c.classifier_blocks = 2;
  c.base_channels = base_channels;
  c.num_classes = num_classes;
  return c;
}

NetworkConfig NetworkConfig::Dsvc(int num_classes, int base_channels) {
  NetworkConfig c = Devc(num_classes, base_channels);
  c.generator_blocks = 10;
  c.discriminator_blocks = 4;
  c.classifier_blocks = 4;
  return c;
}

void NetworkConfig::Validate() const {
  if (generator_blocks < 0 || discriminator_blocks < 0 || classifier_blocks < 0) {
    throw ParameterError("block counts must be nonnegative");
  }
  if (base_channels < 8) throw ParameterError("base_channels must be at least 8");
  if (num_classes < 2) throw ParameterError("at least two attribute classes are required");
  if (input_dim != kMccDim) {
    throw ParameterError("input_dim must be " + std::to_string(kMccDim));
  }
}

Tensor ConditionedInput(const Tensor& image, int label, int num_classes) {
  CheckLabel(label, num_classes);
  Tensor out(1 + num_classes, image.height(), image.width());
  std::copy(image.data(), image.data() + image.plane(), out.data());
  double* plane = out.data() + static_cast<size_t>(1 + label) * out.plane();
  std::fill(plane, plane + out.plane(), 1.0);
  return out;
}

const Networks& NetworksFor(const NetworkConfig& config) {
  using Key = std::tuple<int, int, int, int, int, int>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<Networks>> cache;
  const Key key{config.generator_blocks, config.discriminator_blocks, config.classifier_blocks,
                config.base_channels,    config.num_classes,          config.input_dim};
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<Networks>(config);
  return *slot;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd p = (logits.array() - logits.maxCoeff()).exp();
  return p / p.sum();
}

// ---------------------------------------------------------------------------

GeneratorNet::GeneratorNet(const NetworkConfig& config) : config_(config) {
  config_.Validate();
  const int c = config_.base_channels;
  ParameterSet& p = layout_;
  in_conv_ = Conv2d(p, "in", {1 + config_.num_classes, c, 3, 1, 1});
  down1_ = Conv2d(p, "down1", {c, 2 * c, 4, 2, 1});
  down1_norm_ = InstanceNorm(p, "down1_norm", 2 * c);
  down2_ = Conv2d(p, "down2", {2 * c, 4 * c, 4, 2, 1});
  down2_norm_ = InstanceNorm(p, "down2_norm", 4 * c);
  for (int b = 0; b < config_.generator_blocks; ++b) {
    blocks_.emplace_back(p, "block" + std::to_string(b), 4 * c);
  }
  up1_ = Conv2d(p, "up1", {4 * c, 2 * c, 3, 1, 1});
  up1_norm_ = InstanceNorm(p, "up1_norm", 2 * c);
  up2_ = Conv2d(p, "up2", {2 * c, c, 3, 1, 1});
  up2_norm_ = InstanceNorm(p, "up2_norm", c);
  out_conv_ = Conv2d(p, "out", {c, 1, 3, 1, 1});
}

void GeneratorNet::CheckParameters(const ParameterSet& params) const {
  CheckAgainstLayout(layout_, params, "generator");
}

FrameMatrix GeneratorNet::Forward(const ParameterSet& params, const FrameMatrix& x, int label,
                                  GeneratorTape* tape) const {
  CheckFrames(x, config_.input_dim);
  CheckLabel(label, config_.num_classes);
  const int frames = static_cast<int>(x.rows());
  const int padded = (frames + 3) / 4 * 4;
  GeneratorTape local;
  GeneratorTape& t = tape ? *tape : local;
  t.frames = frames;
  t.padded = padded;

  const Tensor image = PadWidth(FramesToImage(x), padded);
  Tensor h = in_conv_.Forward(params, ConditionedInput(image, label, config_.num_classes),
                              &t.in_conv);
  t.in_pre = h;
  h = LeakyRelu(h, 0.0);

  h = down1_.Forward(params, h, &t.down1);
  h = down1_norm_.Forward(params, h, &t.down1_norm);
  t.down1_pre = h;
  h = LeakyRelu(h, 0.0);
  h = down2_.Forward(params, h, &t.down2);
  h = down2_norm_.Forward(params, h, &t.down2_norm);
  t.down2_pre = h;
  h = LeakyRelu(h, 0.0);

  t.blocks.resize(blocks_.size());
  for (size_t b = 0; b < blocks_.size(); ++b) h = blocks_[b].Forward(params, h, &t.blocks[b]);

  h = up1_.Forward(params, Upsample2x(h), &t.up1);
  h = up1_norm_.Forward(params, h, &t.up1_norm);
  t.up1_pre = h;
  h = LeakyRelu(h, 0.0);
  h = up2_.Forward(params, Upsample2x(h), &t.up2);
  h = up2_norm_.Forward(params, h, &t.up2_norm);
  t.up2_pre = h;
  h = LeakyRelu(h, 0.0);

  h = out_conv_.Forward(params, h, &t.out_conv);
  h += image;
  return ImageToFrames(CropWidth(h, frames));
}

FrameMatrix GeneratorNet::Backward(const ParameterSet& params, const GeneratorTape& t,
                                   const FrameMatrix& dy, Gradients* grads) const {
  const Tensor d_out = CropWidthBackward(FramesToImage(dy), t.padded);
  Tensor g = out_conv_.Backward(params, t.out_conv, d_out, grads);

  g = LeakyReluBackward(t.up2_pre, g, 0.0);
  g = up2_norm_.Backward(params, t.up2_norm, g, grads);
  g = Upsample2xBackward(up2_.Backward(params, t.up2, g, grads));
  g = LeakyReluBackward(t.up1_pre, g, 0.0);
  g = up1_norm_.Backward(params, t.up1_norm, g, grads);
  g = Upsample2xBackward(up1_.Backward(params, t.up1, g, grads));

  for (size_t b = blocks_.size(); b-- > 0;) g = blocks_[b].Backward(params, t.blocks[b], g, grads);

  g = LeakyReluBackward(t.down2_pre, g, 0.0);
  g = down2_norm_.Backward(params, t.down2_norm, g, grads);
  g = down2_.Backward(params, t.down2, g, grads);
  g = LeakyReluBackward(t.down1_pre, g, 0.0);
  g = down1_norm_.Backward(params, t.down1_norm, g, grads);
  g = down1_.Backward(params, t.down1, g, grads);
  g = LeakyReluBackward(t.in_pre, g, 0.0);
  g = FirstChannel(in_conv_.Backward(params, t.in_conv, g, grads));
  g += d_out;
  return ImageToFrames(PadWidthBackward(g, t.frames));
}

// ---------------------------------------------------------------------------

ConvEncoder::ConvEncoder(ParameterSet& p, const std::string& prefix, int in_channels,
                         int base_channels, int blocks, int outputs) {
  const int c = base_channels;
  in_conv_ = Conv2d(p, prefix + "in", {in_channels, c, 3, 1, 1});
  down1_ = Conv2d(p, prefix + "down1", {c, 2 * c, 4, 2, 1});
  down1_norm_ = InstanceNorm(p, prefix + "down1_norm", 2 * c);
  down2_ = Conv2d(p, prefix + "down2", {2 * c, 4 * c, 4, 2, 1});
  down2_norm_ = InstanceNorm(p, prefix + "down2_norm", 4 * c);
  for (int b = 0; b < blocks; ++b) {
    blocks_.emplace_back(p, prefix + "block" + std::to_string(b), 4 * c);
  }
  head_ = Linear(p, prefix + "head", 4 * c, outputs);
}

Eigen::VectorXd ConvEncoder::Forward(const ParameterSet& params, const Tensor& x,
                                     EncoderTape* tape) const {
  EncoderTape local;
  EncoderTape& t = tape ? *tape : local;
  Tensor h = in_conv_.Forward(params, x, &t.in_conv);
  t.in_pre = h;
  h = LeakyRelu(h, kDiscriminatorSlope);
  h = down1_.Forward(params, h, &t.down1);
  h = down1_norm_.Forward(params, h, &t.down1_norm);
  t.down1_pre = h;
  h = LeakyRelu(h, kDiscriminatorSlope);
  h = down2_.Forward(params, h, &t.down2);
  h = down2_norm_.Forward(params, h, &t.down2_norm);
  t.down2_pre = h;
  h = LeakyRelu(h, kDiscriminatorSlope);
  t.blocks.resize(blocks_.size());
  for (size_t b = 0; b < blocks_.size(); ++b) h = blocks_[b].Forward(params, h, &t.blocks[b]);
  t.pooled_height = h.height();
  t.pooled_width = h.width();
  t.pooled = GlobalAveragePool(h);
  return head_.Forward(params, t.pooled);
}

Tensor ConvEncoder::Backward(const ParameterSet& params, const EncoderTape& t,
                             const Eigen::VectorXd& dy, Gradients* grads) const {
  Tensor g = GlobalAveragePoolBackward(head_.Backward(params, t.pooled, dy, grads),
                                       t.pooled_height, t.pooled_width);
  for (size_t b = blocks_.size(); b-- > 0;) g = blocks_[b].Backward(params, t.blocks[b], g, grads);
  g = LeakyReluBackward(t.down2_pre, g, kDiscriminatorSlope);
  g = down2_norm_.Backward(params, t.down2_norm, g, grads);
  g = down2_.Backward(params, t.down2, g, grads);
  g = LeakyReluBackward(t.down1_pre, g, kDiscriminatorSlope);
  g = down1_norm_.Backward(params, t.down1_norm, g, grads);
  g = down1_.Backward(params, t.down1, g, grads);
  g = LeakyReluBackward(t.in_pre, g, kDiscriminatorSlope);
  return in_conv_.Backward(params, t.in_conv, g, grads);
}

// ---------------------------------------------------------------------------

DiscriminatorNet::DiscriminatorNet(const NetworkConfig& config) : config_(config) {
  config_.Validate();
  encoder_ = ConvEncoder(layout_, "", 1 + config_.num_classes, config_.base_channels,
                         config_.discriminator_blocks, 1);
}

void DiscriminatorNet::CheckParameters(const ParameterSet& params) const {
  CheckAgainstLayout(layout_, params, "discriminator");
}

double DiscriminatorNet::Logit(const ParameterSet& params, const FrameMatrix& x, int label,
                               EncoderTape* tape) const {
  CheckFrames(x, config_.input_dim);
  const Tensor input = ConditionedInput(FramesToImage(x), label, config_.num_classes);
  return encoder_.Forward(params, input, tape)(0);
}

FrameMatrix DiscriminatorNet::Backward(const ParameterSet& params, const EncoderTape& tape,
                                       double dlogit, Gradients* grads) const {
  Eigen::VectorXd dy(1);
  dy(0) = dlogit;
  return ImageToFrames(FirstChannel(encoder_.Backward(params, tape, dy, grads)));
}

ClassifierNet::ClassifierNet(const NetworkConfig& config) : config_(config) {
  config_.Validate();
  encoder_ = ConvEncoder(layout_, "", 1, config_.base_channels, config_.classifier_blocks,
                         config_.num_classes);
}

void ClassifierNet::CheckParameters(const ParameterSet& params) const {
  CheckAgainstLayout(layout_, params, "classifier");
}

Eigen::VectorXd ClassifierNet::Logits(const ParameterSet& params, const FrameMatrix& x,
                                      EncoderTape* tape) const {
  CheckFrames(x, config_.input_dim);
  return encoder_.Forward(params, FramesToImage(x), tape);
}

FrameMatrix ClassifierNet::Backward(const ParameterSet& params, const EncoderTape& tape,
                                    const Eigen::VectorXd& dlogits, Gradients* grads) const {
  return ImageToFrames(encoder_.Backward(params, tape, dlogits, grads));
}

}  // namespace mass::core
