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
#include <utility>
#include <vector>

#include "mass/common.h"

namespace mass::eval {

// Inclusive coefficient range entering the distortion; c0 is excluded by
// default.
struct CoefficientRange {
  int first = 1;
  int last = 24;
  int size() const { return last - first + 1; }
};

// Mel-cepstral distortion in dB between two frames:
//   (10 / ln 10) * sqrt(2 * sum_{i=first}^{last} (t_i - c_i)^2).
double Mcd(const Eigen::Ref<const Eigen::RowVectorXd>& converted,
           const Eigen::Ref<const Eigen::RowVectorXd>& target, CoefficientRange range = {});

struct DtwPath {
  std::vector<std::pair<int, int>> steps;  // (index into a, index into b)
  double cost = 0.0;                       // summed Euclidean local cost
};

// Monotonic alignment from (0, 0) to (Ta - 1, Tb - 1) with steps
// (1, 0), (0, 1) and (1, 1) minimising the summed Euclidean distance
// between aligned rows. Ties prefer the diagonal, then advancing a.
DtwPath DtwAlign(const FrameMatrix& a, const FrameMatrix& b);

// Mean framewise MCD along the DTW path computed on the coefficient range.
double McdUtterance(const FrameMatrix& converted, const FrameMatrix& target,
                    CoefficientRange range = {});

}  // namespace mass::eval
