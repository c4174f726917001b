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

#include "mass/eval/spectral_export.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mass/binary_io.h"
#include "mass/features/mel_cepstrum.h"

namespace mass::eval {
namespace {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

constexpr double kEnergyFloor = 1e-12;

}  // namespace

Eigen::MatrixXd MelFilterbank(const features::AnalysisConfig& cfg, int bands) {
  const int bins = cfg.spectrum_bins();
  const double nyquist = cfg.sample_rate / 2.0;
  const double top = HzToMel(nyquist);
  std::vector<double> edges(static_cast<size_t>(bands) + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(top * static_cast<double>(i) / static_cast<double>(bands + 1));
  }
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(bands, bins);
  for (int b = 0; b < bands; ++b) {
    const double lo = edges[static_cast<size_t>(b)];
    const double mid = edges[static_cast<size_t>(b) + 1];
    const double hi = edges[static_cast<size_t>(b) + 2];
    for (int k = 0; k < bins; ++k) {
      const double hz = nyquist * k / (bins - 1);
      if (hz > lo && hz < mid) fb(b, k) = (hz - lo) / (mid - lo);
      else if (hz >= mid && hz < hi) fb(b, k) = (hi - hz) / (hi - mid);
    }
  }
  return fb;
}

SpectralSummary SummarizeSpectra(const features::AcousticFeatures& feats,
                                 const features::AnalysisConfig& cfg) {
  feats.Validate();
  SpectralSummary s;
  s.envelope = features::MccToEnvelope(feats.mcc, cfg);
  const Eigen::MatrixXd fb = MelFilterbank(cfg);
  const Eigen::MatrixXd power = s.envelope.array().square().matrix();
  const Eigen::MatrixXd energy = power * fb.transpose();
  s.mel = (10.0 * (energy.array() + kEnergyFloor).log10()).matrix();
  return s;
}

void ExportSpectralSummaries(const features::AcousticFeatures& feats,
                             const features::AnalysisConfig& cfg, const std::filesystem::path& path) {
  const SpectralSummary s = SummarizeSpectra(feats, cfg);
  std::string out;
  for (Eigen::Index k = 0; k < s.envelope.cols(); ++k) out += "env_" + std::to_string(k) + ",";
  for (Eigen::Index b = 0; b < s.mel.cols(); ++b) {
    out += "mel_" + std::to_string(b) + (b + 1 < s.mel.cols() ? "," : "\n");
  }
  char buf[40];
  for (Eigen::Index t = 0; t < s.envelope.rows(); ++t) {
    for (Eigen::Index k = 0; k < s.envelope.cols(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g,", s.envelope(t, k));
      out += buf;
    }
    for (Eigen::Index b = 0; b < s.mel.cols(); ++b) {
      std::snprintf(buf, sizeof(buf), b + 1 < s.mel.cols() ? "%.17g," : "%.17g\n", s.mel(t, b));
      out += buf;
    }
  }
  WriteFileAtomic(path.string(), out);
}

SpectralSummary LoadSpectralSummaries(const std::filesystem::path& path) {
  std::istringstream in(ReadFileBytes(path.string()));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty spectral summary");
  int env_cols = 0, mel_cols = 0;
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      if (cell.rfind("env_", 0) == 0) ++env_cols;
      else if (cell.rfind("mel_", 0) == 0) ++mel_cols;
      else throw FormatError(path.string() + ": unexpected column " + cell);
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(row.size()) != env_cols + mel_cols) {
      throw FormatError(path.string() + ": row " + std::to_string(rows.size() + 1) + " has " +
                        std::to_string(row.size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  SpectralSummary s;
  s.envelope.resize(static_cast<Eigen::Index>(rows.size()), env_cols);
  s.mel.resize(static_cast<Eigen::Index>(rows.size()), mel_cols);
  for (size_t t = 0; t < rows.size(); ++t) {
    for (int k = 0; k < env_cols; ++k) s.envelope(static_cast<Eigen::Index>(t), k) = rows[t][static_cast<size_t>(k)];
    for (int b = 0; b < mel_cols; ++b) {
      s.mel(static_cast<Eigen::Index>(t), b) = rows[t][static_cast<size_t>(env_cols + b)];
    }
  }
  return s;
}

}  // namespace mass::eval
