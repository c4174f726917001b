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

#include "mass/core/layers.h"

namespace mass::core {

struct CBlockCache {
  Conv2dCache conv1;
  InstanceNormCache norm1;
  Tensor pre_relu;
  Conv2dCache conv2;
  InstanceNormCache norm2;
};

// Residual unit: y = x + IN(conv(relu(IN(conv(x))))), 3x3 convolutions at
// stride 1 with same padding. With zeroed convolutions and the default
// normalisation shift of zero the residual branch vanishes and y == x.
class CBlock {
 public:
  CBlock() = default;
  CBlock(ParameterSet& params, const std::string& name, int channels);

  Tensor Forward(const ParameterSet& params, const Tensor& x, CBlockCache* cache) const;
  Tensor Backward(const ParameterSet& params, const CBlockCache& cache, const Tensor& dy,
                  Gradients* grads) const;

  const Conv2d& conv1() const { return conv1_; }
  const Conv2d& conv2() const { return conv2_; }

 private:
  Conv2d conv1_;
  InstanceNorm norm1_;
  Conv2d conv2_;
  InstanceNorm norm2_;
};

}  // namespace mass::core
