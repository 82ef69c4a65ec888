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
#include <string>
#include <vector>

#include "folidx/deform.hpp"
#include "folidx/opcalc.hpp"

/// Named operators used by the tests, the CLI and the examples in README.
namespace folidx::catalog {

/// -d_x^2 + d_y on T^2, split (1,1). Kernel and cokernel are the constants.
DiffOp heat();
/// -d_x^2 on T^2, split (1,1); not weighted-elliptic (sigma(0, eta) = 0).
DiffOp leafwise_laplacian();
/// e^{i k x1}(d_1 + i d_2) + eps, split (2,0).
DiffOp winding_operator(int k, double eps);
/// d_1 + W(x) d_2 on C^2, split (2,0), with
/// W = i(sin x1 sx + sin x2 sy + (1 - cos x1 - cos x2) sz). Index +2.
DiffOp coupled_calibration();
/// -d_x^2 - d_y^2 + d_y on T^2 with the given split.
DiffOp mixed_laplacian(FoliationSplit split);

/// Trigonometric building blocks on T^n.
TrigPoly sin_x(int n, int axis, cplx amplitude = 1.0);
TrigPoly cos_x(int n, int axis, cplx amplitude = 1.0);

struct RandomSpec {
  int rank = 1;                ///< 1 or 2
  double top_amplitude = 0.15; ///< size of the trig perturbation of the top coefficients
  double lower_amplitude = 0.1;
  int bandwidth = 1;
};

/// Seeded (1,1) instance a(x)(-d_x^2) + b(x) d_y + c(x) d_x with a, b close to 1.
DiffOp random_weighted_elliptic(std::uint64_t seed, const RandomSpec& spec = {});
/// Random lower-order term c(x) d_x + e(x) of weighted order <= 1.
DiffOp random_lower_order(std::uint64_t seed, int rank, double amplitude, int bandwidth = 1);

/// Foliated chart changes phi(x, y) = (f(x, y), g(y)) fixing the origin:
/// four on (p,q) = (1,1) and one on (2,1).
std::vector<ChartMap> foliated_maps();
/// Maps whose transverse part depends on x: (x, y + x^2) and (x, y + x).
std::vector<ChartMap> non_foliated_controls();
/// Sample points for the coordinate law on the given split.
std::vector<GradedPoint> law_points(FoliationSplit split);

}  // namespace folidx::catalog
