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

#include "mass/common.h"
#include "mass/features/analysis.h"

namespace mass::features {

// Mel-cepstral analysis of a magnitude envelope on the linear FFT grid.
//
// The log envelope is modelled as
//   ln|H(w)| = c_0 + sum_{m=1}^{M-1} c_m cos(m * b(w)),
// where b is the first-order all-pass frequency warping with constant alpha.
// Coefficients are the weighted least-squares fit on the fft_size/2 + 1 bins,
// with weights equal to db/dw so the fit approximates a uniform integral over
// warped frequency. Envelopes already in the model's span round-trip exactly.
class MelCepstrum {
 public:
  explicit MelCepstrum(const AnalysisConfig& cfg);

  FrameMatrix FromEnvelope(const FrameMatrix& envelope) const;
  FrameMatrix ToEnvelope(const FrameMatrix& mcc) const;

  int order() const { return order_; }
  int bins() const { return bins_; }

 private:
  int order_;
  int bins_;
  Eigen::MatrixXd basis_;       // bins x order
  Eigen::MatrixXd projection_;  // order x bins
};

// Warped frequency of w (radians) for all-pass constant alpha.
double WarpFrequency(double w, double alpha);

FrameMatrix EnvelopeToMcc(const FrameMatrix& envelope, const AnalysisConfig& cfg);
FrameMatrix MccToEnvelope(const FrameMatrix& mcc, const AnalysisConfig& cfg);

}  // namespace mass::features
