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

#include "mass/eval/mcd.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mass::eval {
namespace {

const double kDbScale = 10.0 / std::log(10.0);

void CheckRange(CoefficientRange r, Eigen::Index dims) {
  if (r.first < 0 || r.last < r.first || r.last >= dims) {
    throw InputError("coefficient range [" + std::to_string(r.first) + ", " +
                     std::to_string(r.last) + "] outside a " + std::to_string(dims) +
                     "-dimensional frame");
  }
}

}  // namespace

double Mcd(const Eigen::Ref<const Eigen::RowVectorXd>& converted,
           const Eigen::Ref<const Eigen::RowVectorXd>& target, CoefficientRange range) {
  if (converted.size() != target.size()) throw InputError("mcd: frame dimensions differ");
  CheckRange(range, converted.size());
  if (!converted.allFinite() || !target.allFinite()) throw InputError("mcd: non-finite input");
  const auto d = target.segment(range.first, range.size()) - converted.segment(range.first, range.size());
  return kDbScale * std::sqrt(2.0 * d.squaredNorm());
}

DtwPath DtwAlign(const FrameMatrix& a, const FrameMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("dtw: sequences have different frame dimensions");
  if (a.rows() == 0 || b.rows() == 0) throw InputError("dtw: empty sequence");
  const Eigen::Index n = a.rows(), m = b.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Constant(n, m, inf);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double local = (a.row(i) - b.row(j)).norm();
      if (i == 0 && j == 0) {
        acc(i, j) = local;
        continue;
      }
      double best = inf;
      if (i > 0 && j > 0) best = acc(i - 1, j - 1);
      if (i > 0) best = std::min(best, acc(i - 1, j));
      if (j > 0) best = std::min(best, acc(i, j - 1));
      acc(i, j) = best + local;
    }
  }

  DtwPath path;
  path.cost = acc(n - 1, m - 1);
  Eigen::Index i = n - 1, j = m - 1;
  path.steps.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && acc(i - 1, j - 1) <= acc(i - 1, j) && acc(i - 1, j - 1) <= acc(i, j - 1)) {
      --i;
      --j;
    } else if (i > 0 && (j == 0 || acc(i - 1, j) <= acc(i, j - 1))) {
      --i;
    } else {
      --j;
    }
    path.steps.emplace_back(i, j);
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

double McdUtterance(const FrameMatrix& converted, const FrameMatrix& target, CoefficientRange range) {
  if (converted.cols() != target.cols()) throw InputError("mcd: MCC dimensions differ");
  if (converted.rows() == 0 || target.rows() == 0) throw InputError("mcd: empty utterance");
  CheckRange(range, converted.cols());
  const FrameMatrix a = converted.middleCols(range.first, range.size());
  const FrameMatrix b = target.middleCols(range.first, range.size());
  const DtwPath path = DtwAlign(a, b);
  double total = 0.0;
  for (const auto& [i, j] : path.steps) {
    total += kDbScale * std::sqrt(2.0 * (a.row(i) - b.row(j)).squaredNorm());
  }
  return total / static_cast<double>(path.steps.size());
}

}  // namespace mass::eval
