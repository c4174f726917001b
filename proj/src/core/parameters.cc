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

#include "mass/core/parameters.h"

#include <cmath>
#include <functional>
#include <numeric>

namespace mass::core {

int ParameterSet::Add(std::string name, std::vector<int> shape) {
  const size_t count = std::accumulate(shape.begin(), shape.end(), size_t{1}, std::multiplies<>());
  params_.push_back({std::move(name), std::move(shape), AlignedVector(count, 0.0)});
  return static_cast<int>(params_.size()) - 1;
}

size_t ParameterSet::ScalarCount() const {
  size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

int ParameterSet::Find(const std::string& name) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

Gradients::Gradients(const ParameterSet& params) {
  g_.reserve(static_cast<size_t>(params.size()));
  for (const auto& p : params) g_.emplace_back(p.value.size(), 0.0);
}

void Gradients::SetZero() {
  for (auto& g : g_) std::fill(g.begin(), g.end(), 0.0);
}

void Gradients::Scale(double s) {
  for (auto& g : g_) {
    for (double& v : g) v *= s;
  }
}

void Gradients::Add(const Gradients& other, double weight) {
  for (size_t i = 0; i < g_.size(); ++i) {
    for (size_t j = 0; j < g_[i].size(); ++j) g_[i][j] += weight * other.g_[i][j];
  }
}

bool Gradients::AllZero() const {
  for (const auto& g : g_) {
    for (double v : g) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

bool Gradients::AllFinite() const {
  for (const auto& g : g_) {
    for (double v : g) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void RoundToFloat(ParameterSet& params) {
  for (auto& p : params) {
    for (double& v : p.value) v = static_cast<double>(static_cast<float>(v));
  }
}

}  // namespace mass::core
