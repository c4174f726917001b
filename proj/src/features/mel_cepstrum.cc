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

#include "mass/features/mel_cepstrum.h"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

namespace mass::features {

double WarpFrequency(double w, double alpha) {
  return w + 2.0 * std::atan2(alpha * std::sin(w), 1.0 - alpha * std::cos(w));
}

MelCepstrum::MelCepstrum(const AnalysisConfig& cfg) : order_(cfg.mcc_order), bins_(cfg.spectrum_bins()) {
  cfg.Validate();
  const double alpha = cfg.mel_warp_alpha;
  const double step = std::numbers::pi / (bins_ - 1);
  basis_.resize(bins_, order_);
  Eigen::VectorXd weight(bins_);
  for (int k = 0; k < bins_; ++k) {
    const double w = k * step;
    const double warped = WarpFrequency(w, alpha);
    for (int m = 0; m < order_; ++m) basis_(k, m) = std::cos(m * warped);
    // Trapezoid rule on the linear grid times the warping Jacobian.
    const double jacobian = (1.0 - alpha * alpha) / (1.0 - 2.0 * alpha * std::cos(w) + alpha * alpha);
    weight(k) = ((k == 0 || k == bins_ - 1) ? 0.5 : 1.0) * jacobian;
  }
  const Eigen::MatrixXd weighted = basis_.transpose() * weight.asDiagonal();
  const Eigen::MatrixXd normal = weighted * basis_;
  projection_ = normal.ldlt().solve(weighted);
}

FrameMatrix MelCepstrum::FromEnvelope(const FrameMatrix& envelope) const {
  if (envelope.cols() != bins_) {
    throw InputError("mel-cepstrum: envelope has " + std::to_string(envelope.cols()) +
                     " bins, expected " + std::to_string(bins_));
  }
  if (!envelope.allFinite() || (envelope.array() <= 0.0).any()) {
    throw InputError("mel-cepstrum: envelope must be finite and strictly positive");
  }
  const FrameMatrix log_env = envelope.array().log().matrix();
  return log_env * projection_.transpose();
}

FrameMatrix MelCepstrum::ToEnvelope(const FrameMatrix& mcc) const {
  if (mcc.cols() != order_) {
    throw InputError("mel-cepstrum: expected " + std::to_string(order_) + " coefficients");
  }
  if (!mcc.allFinite()) throw InputError("mel-cepstrum: non-finite coefficient");
  const FrameMatrix log_env = mcc * basis_.transpose();
  return log_env.array().exp().matrix();
}

FrameMatrix EnvelopeToMcc(const FrameMatrix& envelope, const AnalysisConfig& cfg) {
  return MelCepstrum(cfg).FromEnvelope(envelope);
}

FrameMatrix MccToEnvelope(const FrameMatrix& mcc, const AnalysisConfig& cfg) {
  return MelCepstrum(cfg).ToEnvelope(mcc);
}

}  // namespace mass::features
