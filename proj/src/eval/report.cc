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

#include "mass/eval/report.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace mass::eval {

void EvalPair::Validate() const {
  if (converted.frames() == 0 || target.frames() == 0) throw InputError(id + ": empty features");
  if (converted.mcc.cols() != kMccDim || target.mcc.cols() != kMccDim) {
    throw InputError(id + ": MCC must be 36-dimensional");
  }
}

double McdUtterance(const EvalPair& pair, CoefficientRange range) {
  pair.Validate();
  return McdUtterance(pair.converted.mcc, pair.target.mcc, range);
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

// Order-independent mean: values are summed in sorted order.
double Mean(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string Format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

DirectionResult EvaluateDirection(const std::string& direction, const std::vector<std::string>& ids,
                                  const std::vector<FrameMatrix>& converted,
                                  const std::vector<FrameMatrix>& target,
                                  const std::vector<FrameMatrix>& original, CoefficientRange range) {
  if (converted.size() != ids.size() || target.size() != ids.size() || original.size() != ids.size()) {
    throw InputError(direction + ": converted, target and original sets differ in size");
  }
  if (ids.empty()) throw InputError(direction + ": no evaluation pairs");
  DirectionResult r;
  r.direction = direction;
  r.pair_ids = ids;
  for (size_t i = 0; i < ids.size(); ++i) {
    r.converted_mcd.push_back(McdUtterance(converted[i], target[i], range));
    r.zero_effort_mcd.push_back(McdUtterance(original[i], target[i], range));
  }
  r.converted_mean = Mean(r.converted_mcd);
  r.zero_effort_mean = Mean(r.zero_effort_mcd);
  r.converted_median = Median(r.converted_mcd);
  r.zero_effort_median = Median(r.zero_effort_mcd);
  return r;
}

std::string EvalReport::ToText(const std::string& model_name) const {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Model"});
  rows.push_back({"Zero effort"});
  rows.push_back({model_name});
  rows.push_back({"Pairs"});
  for (const auto& d : directions) {
    rows[0].push_back(d.direction);
    rows[1].push_back(Format(d.zero_effort_mean));
    rows[2].push_back(Format(d.converted_mean));
    rows[3].push_back(std::to_string(d.pairs()));
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      if (c + 1 < row.size()) cell.resize(width[c] + 2, ' ');
      line += cell;
    }
    out += line + "\n";
  }
  return out;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json j;
  j["config"] = config;
  j["directions"] = nlohmann::json::array();
  for (const auto& d : directions) {
    nlohmann::json pairs = nlohmann::json::array();
    for (size_t i = 0; i < d.pair_ids.size(); ++i) {
      pairs.push_back({{"id", d.pair_ids[i]},
                       {"converted_mcd", d.converted_mcd[i]},
                       {"zero_effort_mcd", d.zero_effort_mcd[i]}});
    }
    j["directions"].push_back({{"direction", d.direction},
                               {"pairs", d.pairs()},
                               {"converted_mean", d.converted_mean},
                               {"zero_effort_mean", d.zero_effort_mean},
                               {"converted_median", d.converted_median},
                               {"zero_effort_median", d.zero_effort_median},
                               {"per_pair", std::move(pairs)}});
  }
  return j;
}

}  // namespace mass::eval
