#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The randcert Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "randcert/classifiers.hpp"

namespace randcert {

/**
 * Model files are JSON objects:
 *
 *   {"variant": "linear", "weights": [[...], ...], "bias": [...],
 *    "noise": {"sigma": 0.5}}
 *   {"variant": "grid", "origin": [x0, y0], "cell_size": h, "shape": [nx, ny],
 *    "labels": [...], "num_classes": K, "noise": {"covariance": [[...], ...]}}
 *
 * "noise" is optional. Malformed files raise ValidationError.
 */
struct ModelFile
{
  DeterministicClassifier          base;
  std::optional<GaussianNoiseSpec> noise;
};

ModelFile      ModelFromJson(nlohmann::json const &doc);
nlohmann::json ModelToJson(DeterministicClassifier const &base,
                           std::optional<GaussianNoiseSpec> const &noise);
ModelFile      LoadModelFile(std::string const &path);

}  // namespace randcert
