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

#include "mass/core/layers.h"

#include <cmath>
#include <string>
#include <utility>

namespace mass::core {
namespace {

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int OutSize(int in, const Conv2dSpec& s) { return (in + 2 * s.padding - s.kernel) / s.stride + 1; }

// Output positions [lo, hi) whose input column ow * stride + offset lies
// inside [0, in).
std::pair<int, int> ValidRange(int out, int in, int stride, int offset) {
  int lo = 0;
  while (lo < out && lo * stride + offset < 0) ++lo;
  int hi = out;
  while (hi > lo && (hi - 1) * stride + offset >= in) --hi;
  return {lo, hi};
}

}  // namespace

Conv2d::Conv2d(ParameterSet& params, const std::string& name, const Conv2dSpec& spec) : spec_(spec) {
  weight_ = params.Add(name + "/weight", {spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
  bias_ = params.Add(name + "/bias", {spec.out_channels});
}

Tensor Conv2d::Forward(const ParameterSet& params, const Tensor& x, Conv2dCache* cache) const {
  if (x.channels() != spec_.in_channels) {
    throw ParameterError("conv2d: expected " + std::to_string(spec_.in_channels) +
                         " input channels, got " + std::to_string(x.channels()));
  }
  const int k = spec_.kernel;
  const int out_h = OutSize(x.height(), spec_);
  const int out_w = OutSize(x.width(), spec_);
  if (out_h < 1 || out_w < 1) throw InputError("conv2d: input smaller than kernel");
  const int rows = spec_.in_channels * k * k;
  const int cols = out_h * out_w;

  RowMatrix columns(rows, cols);
  const int stride = spec_.stride;
  for (int c = 0; c < spec_.in_channels; ++c) {
    const double* plane = x.data() + static_cast<size_t>(c) * x.plane();
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        double* row = columns.row((c * k + ki) * k + kj).data();
        const auto [lo, hi] = ValidRange(out_w, x.width(), stride, kj - spec_.padding);
        for (int oh = 0; oh < out_h; ++oh) {
          const int ih = oh * stride - spec_.padding + ki;
          double* dst = row + oh * out_w;
          if (ih < 0 || ih >= x.height()) {
            std::fill(dst, dst + out_w, 0.0);
            continue;
          }
          std::fill(dst, dst + lo, 0.0);
          std::fill(dst + hi, dst + out_w, 0.0);
          const double* src = plane + ih * x.width() + kj - spec_.padding;
          for (int ow = lo; ow < hi; ++ow) dst[ow] = src[ow * stride];
        }
      }
    }
  }

  const ConstRowMatrixMap weight(params[weight_].value.data(), spec_.out_channels, rows);
  const Eigen::Map<const Eigen::VectorXd> bias(params[bias_].value.data(), spec_.out_channels);
  Tensor y(spec_.out_channels, out_h, out_w);
  auto ym = y.AsMatrix();
  ym.noalias() = weight * columns;
  ym.colwise() += bias;

  if (cache != nullptr) {
    cache->columns = std::move(columns);
    cache->in_height = x.height();
    cache->in_width = x.width();
  }
  return y;
}

Tensor Conv2d::Backward(const ParameterSet& params, const Conv2dCache& cache, const Tensor& dy,
                        Gradients* grads) const {
  const int k = spec_.kernel;
  const int rows = spec_.in_channels * k * k;
  const int out_w = dy.width();
  const int out_h = dy.height();
  const auto dym = dy.AsMatrix();
  if (grads != nullptr) {
    RowMatrixMap dw((*grads)[weight_].data(), spec_.out_channels, rows);
    dw.noalias() += dym * cache.columns.transpose();
    Eigen::Map<Eigen::VectorXd> db((*grads)[bias_].data(), spec_.out_channels);
    db += dym.rowwise().sum();
  }
  const ConstRowMatrixMap weight(params[weight_].value.data(), spec_.out_channels, rows);
  const RowMatrix dcols = weight.transpose() * dym;

  Tensor dx(spec_.in_channels, cache.in_height, cache.in_width);
  const int stride = spec_.stride;
  for (int c = 0; c < spec_.in_channels; ++c) {
    double* plane = dx.data() + static_cast<size_t>(c) * dx.plane();
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        const double* row = dcols.row((c * k + ki) * k + kj).data();
        const auto [lo, hi] = ValidRange(out_w, cache.in_width, stride, kj - spec_.padding);
        for (int oh = 0; oh < out_h; ++oh) {
          const int ih = oh * stride - spec_.padding + ki;
          if (ih < 0 || ih >= cache.in_height) continue;
          double* dst = plane + ih * cache.in_width + kj - spec_.padding;
          const double* src = row + oh * out_w;
          for (int ow = lo; ow < hi; ++ow) dst[ow * stride] += src[ow];
        }
      }
    }
  }
  return dx;
}

InstanceNorm::InstanceNorm(ParameterSet& params, const std::string& name, int channels)
    : channels_(channels) {
  gamma_ = params.Add(name + "/gamma", {channels});
  beta_ = params.Add(name + "/beta", {channels});
}

Tensor InstanceNorm::Forward(const ParameterSet& params, const Tensor& x,
                             InstanceNormCache* cache) const {
  if (x.channels() != channels_) throw ParameterError("instance norm: channel mismatch");
  const int n = x.plane();
  const auto& gamma = params[gamma_].value;
  const auto& beta = params[beta_].value;
  Tensor y(x.channels(), x.height(), x.width());
  Tensor normalized(x.channels(), x.height(), x.width());
  std::vector<double> inv_std(static_cast<size_t>(channels_));
  for (int c = 0; c < channels_; ++c) {
    const double* in = x.data() + static_cast<size_t>(c) * n;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += in[i];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += (in[i] - mean) * (in[i] - mean);
    var /= n;
    const double is = 1.0 / std::sqrt(var + kInstanceNormEps);
    inv_std[c] = is;
    double* xn = normalized.data() + static_cast<size_t>(c) * n;
    double* out = y.data() + static_cast<size_t>(c) * n;
    for (int i = 0; i < n; ++i) {
      xn[i] = (in[i] - mean) * is;
      out[i] = gamma[c] * xn[i] + beta[c];
    }
  }
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Tensor InstanceNorm::Backward(const ParameterSet& params, const InstanceNormCache& cache,
                              const Tensor& dy, Gradients* grads) const {
  const int n = dy.plane();
  const auto& gamma = params[gamma_].value;
  Tensor dx(dy.channels(), dy.height(), dy.width());
  for (int c = 0; c < channels_; ++c) {
    const double* g = dy.data() + static_cast<size_t>(c) * n;
    const double* xn = cache.normalized.data() + static_cast<size_t>(c) * n;
    double sum_g = 0.0, sum_gx = 0.0;
    for (int i = 0; i < n; ++i) {
      sum_g += g[i];
      sum_gx += g[i] * xn[i];
    }
    if (grads != nullptr) {
      (*grads)[gamma_][c] += sum_gx;
      (*grads)[beta_][c] += sum_g;
    }
    const double scale = gamma[c] * cache.inv_std[c] / n;
    double* out = dx.data() + static_cast<size_t>(c) * n;
    for (int i = 0; i < n; ++i) out[i] = scale * (n * g[i] - sum_g - xn[i] * sum_gx);
  }
  return dx;
}

Tensor LeakyRelu(const Tensor& x, double slope) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : slope * v;
  return y;
}

Tensor LeakyReluBackward(const Tensor& x, const Tensor& dy, double slope) {
  Tensor dx = dy;
  const auto& xv = x.values();
  auto& d = dx.values();
  for (size_t i = 0; i < d.size(); ++i) {
    if (!(xv[i] > 0.0)) d[i] *= slope;
  }
  return dx;
}

Tensor Upsample2x(const Tensor& x) {
  Tensor y(x.channels(), 2 * x.height(), 2 * x.width());
  for (int c = 0; c < x.channels(); ++c) {
    for (int h = 0; h < y.height(); ++h) {
      for (int w = 0; w < y.width(); ++w) y(c, h, w) = x(c, h / 2, w / 2);
    }
  }
  return y;
}

Tensor Upsample2xBackward(const Tensor& dy) {
  Tensor dx(dy.channels(), dy.height() / 2, dy.width() / 2);
  for (int c = 0; c < dy.channels(); ++c) {
    for (int h = 0; h < dy.height(); ++h) {
      for (int w = 0; w < dy.width(); ++w) dx(c, h / 2, w / 2) += dy(c, h, w);
    }
  }
  return dx;
}

Tensor PadWidth(const Tensor& x, int width) {
  if (width == x.width()) return x;
  Tensor y(x.channels(), x.height(), width);
  for (int c = 0; c < x.channels(); ++c) {
    for (int h = 0; h < x.height(); ++h) {
      for (int w = 0; w < width; ++w) y(c, h, w) = x(c, h, std::min(w, x.width() - 1));
    }
  }
  return y;
}

Tensor PadWidthBackward(const Tensor& dy, int original_width) {
  if (original_width == dy.width()) return dy;
  Tensor dx(dy.channels(), dy.height(), original_width);
  for (int c = 0; c < dy.channels(); ++c) {
    for (int h = 0; h < dy.height(); ++h) {
      for (int w = 0; w < dy.width(); ++w) dx(c, h, std::min(w, original_width - 1)) += dy(c, h, w);
    }
  }
  return dx;
}

Tensor CropWidth(const Tensor& x, int width) {
  if (width == x.width()) return x;
  Tensor y(x.channels(), x.height(), width);
  for (int c = 0; c < x.channels(); ++c) {
    for (int h = 0; h < x.height(); ++h) {
      for (int w = 0; w < width; ++w) y(c, h, w) = x(c, h, w);
    }
  }
  return y;
}

Tensor CropWidthBackward(const Tensor& dy, int padded_width) {
  if (padded_width == dy.width()) return dy;
  Tensor dx(dy.channels(), dy.height(), padded_width);
  for (int c = 0; c < dy.channels(); ++c) {
    for (int h = 0; h < dy.height(); ++h) {
      for (int w = 0; w < dy.width(); ++w) dx(c, h, w) = dy(c, h, w);
    }
  }
  return dx;
}

Eigen::VectorXd GlobalAveragePool(const Tensor& x) {
  return x.AsMatrix().rowwise().mean();
}

Tensor GlobalAveragePoolBackward(const Eigen::VectorXd& dy, int height, int width) {
  Tensor dx(static_cast<int>(dy.size()), height, width);
  const double inv = 1.0 / (static_cast<double>(height) * width);
  auto m = dx.AsMatrix();
  for (Eigen::Index c = 0; c < dy.size(); ++c) m.row(c).setConstant(dy(c) * inv);
  return dx;
}

Linear::Linear(ParameterSet& params, const std::string& name, int in, int out) : in_(in), out_(out) {
  weight_ = params.Add(name + "/weight", {out, in});
  bias_ = params.Add(name + "/bias", {out});
}

Eigen::VectorXd Linear::Forward(const ParameterSet& params, const Eigen::VectorXd& x) const {
  const ConstRowMatrixMap w(params[weight_].value.data(), out_, in_);
  const Eigen::Map<const Eigen::VectorXd> b(params[bias_].value.data(), out_);
  return w * x + b;
}

Eigen::VectorXd Linear::Backward(const ParameterSet& params, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& dy, Gradients* grads) const {
  if (grads != nullptr) {
    RowMatrixMap dw((*grads)[weight_].data(), out_, in_);
    dw.noalias() += dy * x.transpose();
    Eigen::Map<Eigen::VectorXd> db((*grads)[bias_].data(), out_);
    db += dy;
  }
  const ConstRowMatrixMap w(params[weight_].value.data(), out_, in_);
  return w.transpose() * dy;
}

void InitializeParameters(ParameterSet& params, std::mt19937_64& rng) {
  for (auto& p : params) {
    if (EndsWith(p.name, "/gamma")) {
      std::fill(p.value.begin(), p.value.end(), 1.0);
    } else if (EndsWith(p.name, "/weight")) {
      size_t fan_in = 1;
      for (size_t i = 1; i < p.shape.size(); ++i) fan_in *= static_cast<size_t>(p.shape[i]);
      std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
      for (double& v : p.value) v = normal(rng);
    } else {
      std::fill(p.value.begin(), p.value.end(), 0.0);
    }
  }
}

}  // namespace mass::core
