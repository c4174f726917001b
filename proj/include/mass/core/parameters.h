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

#include <random>
#include <string>
#include <vector>

#include "mass/common.h"

namespace mass::core {

struct Parameter {
  std::string name;
  std::vector<int> shape;
  AlignedVector value;

  bool operator==(const Parameter&) const = default;
};

// Ordered collection of named tensors; layers refer to entries by index.
class ParameterSet {
 public:
  int Add(std::string name, std::vector<int> shape);

  Parameter& operator[](int i) { return params_[static_cast<size_t>(i)]; }
  const Parameter& operator[](int i) const { return params_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(params_.size()); }
  size_t ScalarCount() const;
  // Index of the named entry, or -1.
  int Find(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  bool operator==(const ParameterSet&) const = default;

 private:
  std::vector<Parameter> params_;
};

// Gradient buffers shaped like a ParameterSet.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ParameterSet& params);

  AlignedVector& operator[](int i) { return g_[static_cast<size_t>(i)]; }
  const AlignedVector& operator[](int i) const { return g_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(g_.size()); }

  void SetZero();
  void Scale(double s);
  void Add(const Gradients& other, double weight = 1.0);
  bool AllZero() const;
  bool AllFinite() const;

 private:
  std::vector<AlignedVector> g_;
};

// Rounds every value to the nearest float32, the precision parameters are
// stored at on disk.
void RoundToFloat(ParameterSet& params);

}  // namespace mass::core
