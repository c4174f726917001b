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

#include "fft.h"

#include <mutex>

#include "mass/common.h"

namespace mass::features {
namespace {
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 2 || (size & (size - 1)) != 0) {
    throw ParameterError("fft size must be a power of two, got " + std::to_string(size));
  }
  std::lock_guard<std::mutex> lock(PlannerMutex());
  time_ = fftw_alloc_real(size_);
  freq_ = fftw_alloc_complex(bins());
  forward_ = fftw_plan_dft_r2c_1d(size_, time_, freq_, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(size_, freq_, time_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(inverse_);
  fftw_free(time_);
  fftw_free(freq_);
}

void RealFft::Forward() { fftw_execute(forward_); }

void RealFft::Inverse() {
  fftw_execute(inverse_);
  const double scale = 1.0 / size_;
  for (int i = 0; i < size_; ++i) time_[i] *= scale;
}

}  // namespace mass::features
