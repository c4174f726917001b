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

#include "mass/core/cblock.h"

namespace mass::core {

CBlock::CBlock(ParameterSet& params, const std::string& name, int channels) {
  const Conv2dSpec same{channels, channels, 3, 1, 1};
  conv1_ = Conv2d(params, name + "/conv1", same);
  norm1_ = InstanceNorm(params, name + "/norm1", channels);
  conv2_ = Conv2d(params, name + "/conv2", same);
  norm2_ = InstanceNorm(params, name + "/norm2", channels);
}

Tensor CBlock::Forward(const ParameterSet& params, const Tensor& x, CBlockCache* cache) const {
  Tensor h = conv1_.Forward(params, x, cache ? &cache->conv1 : nullptr);
  h = norm1_.Forward(params, h, cache ? &cache->norm1 : nullptr);
  if (cache) cache->pre_relu = h;
  h = LeakyRelu(h, 0.0);
  h = conv2_.Forward(params, h, cache ? &cache->conv2 : nullptr);
  h = norm2_.Forward(params, h, cache ? &cache->norm2 : nullptr);
  h += x;
  return h;
}

Tensor CBlock::Backward(const ParameterSet& params, const CBlockCache& cache, const Tensor& dy,
                        Gradients* grads) const {
  Tensor g = norm2_.Backward(params, cache.norm2, dy, grads);
  g = conv2_.Backward(params, cache.conv2, g, grads);
  g = LeakyReluBackward(cache.pre_relu, g, 0.0);
  g = norm1_.Backward(params, cache.norm1, g, grads);
  g = conv1_.Backward(params, cache.conv1, g, grads);
  g += dy;
  return g;
}

}  // namespace mass::core
