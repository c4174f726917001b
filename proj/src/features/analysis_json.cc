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

#include "mass/features/analysis_json.h"

#include <string>

namespace mass::features {

nlohmann::json AnalysisConfigToJson(const AnalysisConfig& c) {
  return {{"sample_rate", c.sample_rate},
          {"frame_shift", c.frame_shift},
          {"fft_size", c.fft_size},
          {"mcc_order", c.mcc_order},
          {"mel_warp_alpha", c.mel_warp_alpha},
          {"f0_floor", c.f0_floor},
          {"f0_ceil", c.f0_ceil},
          {"voicing_threshold", c.voicing_threshold},
          {"envelope_floor", c.envelope_floor},
          {"noise_seed", c.noise_seed}};
}

AnalysisConfig AnalysisConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("analysis config must be a JSON object");
  AnalysisConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "sample_rate") c.sample_rate = value.get<int>();
      else if (key == "frame_shift") c.frame_shift = value.get<double>();
      else if (key == "fft_size") c.fft_size = value.get<int>();
      else if (key == "mcc_order") c.mcc_order = value.get<int>();
      else if (key == "mel_warp_alpha") c.mel_warp_alpha = value.get<double>();
      else if (key == "f0_floor") c.f0_floor = value.get<double>();
      else if (key == "f0_ceil") c.f0_ceil = value.get<double>();
      else if (key == "voicing_threshold") c.voicing_threshold = value.get<double>();
      else if (key == "envelope_floor") c.envelope_floor = value.get<double>();
      else if (key == "noise_seed") c.noise_seed = value.get<unsigned>();
      else throw ParameterError("unknown analysis setting '" + key + "'");
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ParameterError(std::string("analysis config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace mass::features
