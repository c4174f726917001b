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

#include <fftw3.h>

#include <complex>
#include <span>

namespace mass::features {

// Real <-> half-complex transform pair of a fixed size. Plans are created
// under a process-wide lock; execution is reentrant for distinct instances.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  std::span<double> time() { return {time_, static_cast<size_t>(size_)}; }
  std::span<std::complex<double>> freq() {
    return {reinterpret_cast<std::complex<double>*>(freq_), static_cast<size_t>(bins())};
  }

  // time() -> freq(), unnormalised.
  void Forward();
  // freq() -> time(), scaled by 1/size so Inverse(Forward(x)) == x.
  // Clobbers freq().
  void Inverse();

 private:
  int size_;
  double* time_;
  fftw_complex* freq_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace mass::features
