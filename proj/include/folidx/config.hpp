/* Copyright 2026 The folidx Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "folidx/chernform.hpp"
#include "folidx/galerkin.hpp"
#include "folidx/serialize.hpp"

namespace folidx {

/// Everything a pipeline run depends on. Mirrors the JSON config file:
///
///   {"split": [1, 1], "operator": {"expr": "-D[x1]^2 + D[y1]"},
///    "cutoffs": [8, 12, 16], "rule": "relative", "seed": 7,
///    "tolerances": {...}, "invertibility_grid": {...}, "chern": {...},
///    "estimates": {...}, "deform": {...}, "format": "json", "out": "run1"}
struct RunConfig {
  FoliationSplit split{1, 1};
  std::string expr;           ///< DSL text
  std::string operator_file;  ///< DSL text or a serialized DiffOp (JSON)
  std::vector<int> cutoffs{8, 12, 16};
  IndexOptions index;
  double homogeneity_tolerance = 1e-10;
  int homogeneity_samples = 64;
  ChernGridPlan chern;
  std::vector<double> shears;
  std::string probe_expr;     ///< defaults to D[y1] (or D[x_p] when q = 0)
  int probe_trials = 16;
  std::vector<int> probe_cutoffs{8, 16, 32};
  int homotopy_K = 16;
  double homotopy_t_max = 64.0;
  int law_steps = 6;
  std::vector<double> base_point;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out_dir;
  ChernConvention convention = default_convention();

  /// Throws InputError on non-positive tolerances, bad cutoffs or formats.
  void validate() const;
};

RunConfig config_from_json(const json& j);
json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

/// The operator named by expr or operator_file.
DiffOp load_operator(const RunConfig& c);

}  // namespace folidx
