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

#include "mass/core/cblock.h"

namespace mass::core {

// Shortest MCC sequence the networks accept.
inline constexpr int kMinFrames = 32;

struct NetworkConfig {
  int generator_blocks = 6;
  int discriminator_blocks = 2;
  int classifier_blocks = 2;
  int base_channels = 16;
  int num_classes = 2;
  int input_dim = kMccDim;

  static NetworkConfig Devc(int num_classes, int base_channels = 16);
  static NetworkConfig Dsvc(int num_classes, int base_channels = 16);

  void Validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

// (1 + K) x 36 x T network input: the MCC image followed by K label planes,
// plane k filled with 1 when k == label and 0 otherwise.
Tensor ConditionedInput(const Tensor& image, int label, int num_classes);

struct GeneratorTape {
  int frames = 0;
  int padded = 0;
  Conv2dCache in_conv;
  Tensor in_pre;
  Conv2dCache down1;
  InstanceNormCache down1_norm;
  Tensor down1_pre;
  Conv2dCache down2;
  InstanceNormCache down2_norm;
  Tensor down2_pre;
  std::vector<CBlockCache> blocks;
  Conv2dCache up1;
  InstanceNormCache up1_norm;
  Tensor up1_pre;
  Conv2dCache up2;
  InstanceNormCache up2_norm;
  Tensor up2_pre;
  Conv2dCache out_conv;
};

// Fully convolutional generator on a z-normalised T x 36 block:
// input conv, two stride-2 downsamplings, CBlocks, two nearest-neighbour
// upsamplings and an output conv whose result is added to the input.
// Widths are edge-padded to a multiple of 4 internally and cropped back.
class GeneratorNet {
 public:
  explicit GeneratorNet(const NetworkConfig& config);

  const ParameterSet& layout() const { return layout_; }
  // Checks names and shapes against the layout.
  void CheckParameters(const ParameterSet& params) const;

  FrameMatrix Forward(const ParameterSet& params, const FrameMatrix& x, int label,
                      GeneratorTape* tape) const;
  // Gradient with respect to the MCC input.
  FrameMatrix Backward(const ParameterSet& params, const GeneratorTape& tape,
                       const FrameMatrix& dy, Gradients* grads) const;

 private:
  NetworkConfig config_;
  ParameterSet layout_;
  Conv2d in_conv_;
  Conv2d down1_;
  InstanceNorm down1_norm_;
  Conv2d down2_;
  InstanceNorm down2_norm_;
  std::vector<CBlock> blocks_;
  Conv2d up1_;
  InstanceNorm up1_norm_;
  Conv2d up2_;
  InstanceNorm up2_norm_;
  Conv2d out_conv_;
};

struct EncoderTape {
  Conv2dCache in_conv;
  Tensor in_pre;
  Conv2dCache down1;
  InstanceNormCache down1_norm;
  Tensor down1_pre;
  Conv2dCache down2;
  InstanceNormCache down2_norm;
  Tensor down2_pre;
  std::vector<CBlockCache> blocks;
  int pooled_height = 0;
  int pooled_width = 0;
  Eigen::VectorXd pooled;
};

// Strided conv stack, CBlocks, global average pooling and an affine head.
// Shared by the discriminator and the classifier.
class ConvEncoder {
 public:
  ConvEncoder() = default;
  ConvEncoder(ParameterSet& params, const std::string& prefix, int in_channels,
              int base_channels, int blocks, int outputs);

  Eigen::VectorXd Forward(const ParameterSet& params, const Tensor& x, EncoderTape* tape) const;
  Tensor Backward(const ParameterSet& params, const EncoderTape& tape, const Eigen::VectorXd& dy,
                  Gradients* grads) const;

 private:
  Conv2d in_conv_;
  Conv2d down1_;
  InstanceNorm down1_norm_;
  Conv2d down2_;
  InstanceNorm down2_norm_;
  std::vector<CBlock> blocks_;
  Linear head_;
};

// Real/fake logit for an MCC block under a given attribute.
class DiscriminatorNet {
 public:
  explicit DiscriminatorNet(const NetworkConfig& config);

  const ParameterSet& layout() const { return layout_; }
  void CheckParameters(const ParameterSet& params) const;

  double Logit(const ParameterSet& params, const FrameMatrix& x, int label,
               EncoderTape* tape) const;
  FrameMatrix Backward(const ParameterSet& params, const EncoderTape& tape, double dlogit,
                       Gradients* grads) const;

 private:
  NetworkConfig config_;
  ParameterSet layout_;
  ConvEncoder encoder_;
};

// K attribute logits for an unlabelled MCC block.
class ClassifierNet {
 public:
  explicit ClassifierNet(const NetworkConfig& config);

  const ParameterSet& layout() const { return layout_; }
  void CheckParameters(const ParameterSet& params) const;

  Eigen::VectorXd Logits(const ParameterSet& params, const FrameMatrix& x,
                         EncoderTape* tape) const;
  FrameMatrix Backward(const ParameterSet& params, const EncoderTape& tape,
                       const Eigen::VectorXd& dlogits, Gradients* grads) const;

 private:
  NetworkConfig config_;
  ParameterSet layout_;
  ConvEncoder encoder_;
};

struct Networks {
  explicit Networks(const NetworkConfig& config)
      : generator(config), discriminator(config), classifier(config) {}
  GeneratorNet generator;
  DiscriminatorNet discriminator;
  ClassifierNet classifier;
};

// Shared, immutable network descriptors for a configuration; safe to call
// from several threads.
const Networks& NetworksFor(const NetworkConfig& config);

double Sigmoid(double x);
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

}  // namespace mass::core
