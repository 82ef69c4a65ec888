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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "folidx/symbolics.hpp"

namespace folidx {

/// Orientation and normalization of the second Chern form. The sign is a
/// convention fixed once by a calibration operator with known index (+2,
/// signed integral of c2 tr(F^F) comes out near -2), so index = sign * c2 * int tr(F^F).
struct ChernConvention {
  double sign = -1.0;
  double c2 = -1.0 / (8.0 * std::numbers::pi * std::numbers::pi);
  std::string orientation = "dx1^dx2^dxi1^dxi2";
  std::string calibration = "d_1 + W(x) d_2 on T^2, W = i(sin x1 sx + sin x2 sy + (1-cos x1-cos x2) sz)";
  double factor() const { return sign * c2; }
};

inline const ChernConvention& default_convention() {
  static const ChernConvention c;
  return c;
}

struct FormAxis {
  double lo = 0.0;
  double h = 0.0;
  int nodes = 0;
  bool periodic = false;
  double coordinate(int i) const { return lo + h * i; }
};

/// Projection field on T^2 x [-R,R]^2, row-major over (x1, x2, f1, f2).
struct FormGrid {
  std::array<FormAxis, 4> axes;
  int size = 0;  ///< 2m
  std::vector<CMatrix> values;

  std::size_t index(int i0, int i1, int i2, int i3) const {
    return ((static_cast<std::size_t>(i0) * axes[1].nodes + i1) * axes[2].nodes + i2) *
               axes[3].nodes + i3;
  }
  std::size_t node_count() const {
    return static_cast<std::size_t>(axes[0].nodes) * axes[1].nodes * axes[2].nodes *
           axes[3].nodes;
  }
};

struct FormGridSpec {
  int base_nodes = 24;
  int fiber_nodes = 24;
  double radius = 4.0;
  Eigen::MatrixXd shear;  ///< q x p; empty means none
};

/// Samples e_{sigma} on the grid. sigma must be n = 2 and square.
FormGrid sample_form_grid(const WeightedSymbol& s, const FormGridSpec& spec);

struct FormDerivatives {
  std::array<std::vector<CMatrix>, 4> d;
  double max_smoothness = 0.0;  ///< max over nodes and axes of ||d_a e|| h_a
};

/// Central differences (periodic on base axes, second-order one-sided at the
/// fiber ends). Throws RefineGridError when ||d_a e|| h_a >= limit somewhere.
FormDerivatives exterior_derivative(const FormGrid& field, double limit = 0.5);

/// Signed top-degree density factor * tr(F^F), F_ab = e [d_a e, d_b e] e.
std::vector<double> chern_density(const FormGrid& field, const FormDerivatives& de,
                                  const ChernConvention& conv = default_convention());

/// Trapezoid rule (exact rectangle rule on the periodic axes).
double integrate_density(const FormGrid& field, const std::vector<double>& density);

/// CSV of the density over axes (a, b) with the other two indices fixed.
void write_density_slice_csv(std::ostream& os, const FormGrid& field,
                             const std::vector<double>& density, int axis_a, int axis_b,
                             const std::array<int, 4>& fixed);

struct ChernGridPlan {
  int base_nodes = 24;         ///< coarse nodes per axis; fine level doubles h^-1
  std::vector<double> radii{4.0, 6.0, 8.0};
  double smoothness_limit = 0.5;
  double tail_limit = 0.1;
  double integer_tolerance = 0.05;
  InvertibilityPlan invertibility;
};

struct ChernLevel {
  double radius = 0.0;
  int base_nodes = 0;
  int fiber_nodes = 0;
  double h_base = 0.0;
  double h_fiber = 0.0;
  double integral = 0.0;
  double smoothness = 0.0;
};

struct ChernResult {
  double value = 0.0;               ///< extrapolated integral at the largest radius
  double quadrature_error = 0.0;    ///< |fine - coarse| / 3 at the largest radius
  double tail_bound = 0.0;
  double decay_exponent = 0.0;
  long nearest_integer = 0;
  double distance_to_integer = 0.0;
  bool flagged = false;             ///< distance_to_integer >= integer_tolerance
  std::vector<ChernLevel> table;
  std::vector<std::pair<double, double>> extrapolated;  ///< (R, Richardson value)
  ChernConvention convention;
  InvertibilityCertificate certificate;
};

/// Chern-Weil integral of e_sigma over T^2 x [-R,R]^2 with Richardson
/// extrapolation in h and a decay-based tail bound over the radius sweep.
/// Throws UncertifiedError when sigma is not invertible, RefineGridError when
/// the finest grid is too coarse or the tail bound exceeds plan.tail_limit.
ChernResult topological_index(const WeightedSymbol& s, const ChernGridPlan& plan = {},
                              const Eigen::MatrixXd& shear = {});

struct ShearReport {
  Eigen::MatrixXd shear;
  ChernResult reference;
  ChernResult sheared;
  double difference = 0.0;
  double tolerance = 0.0;   ///< sum of both quadrature errors and tail bounds, floored
  bool agree = false;
};

/// Integral after the substitution eta -> eta + S xi (S is q x p).
ShearReport splitting_shear_check(const WeightedSymbol& s, const Eigen::MatrixXd& shear,
                                  const ChernGridPlan& plan = {});

}  // namespace folidx
