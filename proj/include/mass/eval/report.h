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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mass/eval/mcd.h"
#include "mass/features/analysis.h"

namespace mass::eval {

struct EvalPair {
  std::string id;
  features::AcousticFeatures converted;
  features::AcousticFeatures target;

  void Validate() const;
};

double McdUtterance(const EvalPair& pair, CoefficientRange range = {});

// One conversion direction, e.g. "natural-to-bright".
struct DirectionResult {
  std::string direction;
  std::vector<std::string> pair_ids;
  std::vector<double> converted_mcd;    // per pair
  std::vector<double> zero_effort_mcd;  // per pair
  double converted_mean = 0.0;
  double zero_effort_mean = 0.0;
  double converted_median = 0.0;
  double zero_effort_median = 0.0;

  int pairs() const { return static_cast<int>(pair_ids.size()); }
};

// converted[i] and original[i] are both scored against target[i].
DirectionResult EvaluateDirection(const std::string& direction, const std::vector<std::string>& ids,
                                  const std::vector<FrameMatrix>& converted,
                                  const std::vector<FrameMatrix>& target,
                                  const std::vector<FrameMatrix>& original,
                                  CoefficientRange range = {});

struct EvalReport {
  std::vector<DirectionResult> directions;
  nlohmann::json config = nlohmann::json::object();

  // Aligned table: one column per direction, rows for zero effort and the
  // converted system, followed by the pair counts.
  std::string ToText(const std::string& model_name = "Converted") const;
  nlohmann::json ToJson() const;
};

double Median(std::vector<double> values);

}  // namespace mass::eval
