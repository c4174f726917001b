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

#include "mass/core/tensor.h"

namespace mass::core {

Tensor FramesToImage(const FrameMatrix& frames) {
  const int t_len = static_cast<int>(frames.rows());
  const int dim = static_cast<int>(frames.cols());
  Tensor img(1, dim, t_len);
  for (int t = 0; t < t_len; ++t) {
    for (int d = 0; d < dim; ++d) img(0, d, t) = frames(t, d);
  }
  return img;
}

FrameMatrix ImageToFrames(const Tensor& image) {
  FrameMatrix frames(image.width(), image.height());
  for (int d = 0; d < image.height(); ++d) {
    for (int t = 0; t < image.width(); ++t) frames(t, d) = image(0, d, t);
  }
  return frames;
}

}  // namespace mass::core
