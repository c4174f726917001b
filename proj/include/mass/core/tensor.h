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

#include <cassert>
#include <vector>

#include "mass/common.h"

namespace mass::core {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixMap = Eigen::Map<RowMatrix>;
using ConstRowMatrixMap = Eigen::Map<const RowMatrix>;

// Dense C x H x W activation map of a single instance, stored channel-major.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, double fill = 0.0)
      : c_(channels), h_(height), w_(width),
        v_(static_cast<size_t>(channels) * height * width, fill) {}

  int channels() const { return c_; }
  int height() const { return h_; }
  int width() const { return w_; }
  int plane() const { return h_ * w_; }
  size_t size() const { return v_.size(); }
  bool SameShape(const Tensor& o) const { return c_ == o.c_ && h_ == o.h_ && w_ == o.w_; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  AlignedVector& values() { return v_; }
  const AlignedVector& values() const { return v_; }

  double& operator()(int c, int h, int w) {
    assert(c < c_ && h < h_ && w < w_);
    return v_[(static_cast<size_t>(c) * h_ + h) * w_ + w];
  }
  double operator()(int c, int h, int w) const {
    return v_[(static_cast<size_t>(c) * h_ + h) * w_ + w];
  }

  // channels x (height * width) view.
  RowMatrixMap AsMatrix() { return {v_.data(), c_, h_ * w_}; }
  ConstRowMatrixMap AsMatrix() const { return {v_.data(), c_, h_ * w_}; }

  Tensor& operator+=(const Tensor& o) {
    assert(SameShape(o));
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }

 private:
  int c_ = 0, h_ = 0, w_ = 0;
  AlignedVector v_;
};

// A T x 36 MCC block viewed as a 1 x 36 x T image (coefficients along the
// height, frames along the width), and back.
Tensor FramesToImage(const FrameMatrix& frames);
FrameMatrix ImageToFrames(const Tensor& image);

}  // namespace mass::core
