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

#include <string>
#include <vector>

#include "mass/core/parameters.h"
#include "mass/core/tensor.h"

// Layers are stateless descriptors that index into a ParameterSet. Forward
// passes fill an optional cache; Backward consumes it, returns the input
// gradient and, when `grads` is non-null, accumulates parameter gradients.
namespace mass::core {

inline constexpr double kInstanceNormEps = 1e-5;

struct Conv2dSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
  int padding = 1;
};

struct Conv2dCache {
  RowMatrix columns;  // (in * k * k) x (out_h * out_w)
  int in_height = 0;
  int in_width = 0;
};

class Conv2d {
 public:
  Conv2d() = default;
  // Registers <name>/weight [out, in, k, k] and <name>/bias [out].
  Conv2d(ParameterSet& params, const std::string& name, const Conv2dSpec& spec);

  Tensor Forward(const ParameterSet& params, const Tensor& x, Conv2dCache* cache) const;
  Tensor Backward(const ParameterSet& params, const Conv2dCache& cache, const Tensor& dy,
                  Gradients* grads) const;

  const Conv2dSpec& spec() const { return spec_; }
  int weight_index() const { return weight_; }
  int bias_index() const { return bias_; }

 private:
  Conv2dSpec spec_;
  int weight_ = -1;
  int bias_ = -1;
};

struct InstanceNormCache {
  Tensor normalized;  // pre-affine activations
  std::vector<double> inv_std;
};

// Per-instance, per-channel standardisation over H x W with a learned
// per-channel scale and shift.
class InstanceNorm {
 public:
  InstanceNorm() = default;
  InstanceNorm(ParameterSet& params, const std::string& name, int channels);

  Tensor Forward(const ParameterSet& params, const Tensor& x, InstanceNormCache* cache) const;
  Tensor Backward(const ParameterSet& params, const InstanceNormCache& cache, const Tensor& dy,
                  Gradients* grads) const;

 private:
  int channels_ = 0;
  int gamma_ = -1;
  int beta_ = -1;
};

// slope == 0 gives the plain rectifier.
Tensor LeakyRelu(const Tensor& x, double slope);
Tensor LeakyReluBackward(const Tensor& x, const Tensor& dy, double slope);

Tensor Upsample2x(const Tensor& x);
Tensor Upsample2xBackward(const Tensor& dy);

// Replicates the last column until the width is `width`.
Tensor PadWidth(const Tensor& x, int width);
Tensor PadWidthBackward(const Tensor& dy, int original_width);
Tensor CropWidth(const Tensor& x, int width);
Tensor CropWidthBackward(const Tensor& dy, int padded_width);

// Channel means over H x W.
Eigen::VectorXd GlobalAveragePool(const Tensor& x);
Tensor GlobalAveragePoolBackward(const Eigen::VectorXd& dy, int height, int width);

class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet& params, const std::string& name, int in, int out);

  Eigen::VectorXd Forward(const ParameterSet& params, const Eigen::VectorXd& x) const;
  Eigen::VectorXd Backward(const ParameterSet& params, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& dy, Gradients* grads) const;

  int weight_index() const { return weight_; }
  int bias_index() const { return bias_; }

 private:
  int in_ = 0, out_ = 0;
  int weight_ = -1;
  int bias_ = -1;
};

// Initialises weights with He-normal scaling, biases to zero,
// normalisation scales to one and shifts to zero, by parameter-name suffix.
void InitializeParameters(ParameterSet& params, std::mt19937_64& rng);

}  // namespace mass::core
