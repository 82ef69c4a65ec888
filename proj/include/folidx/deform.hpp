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

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "folidx/galerkin.hpp"

namespace folidx {

struct GradedPoint {
  std::vector<double> x;  ///< leafwise part, R^p
  std::vector<double> y;  ///< transverse part, R^q
};

/// delta_t(x, y) = (t x, t^2 y); t >= 0.
GradedPoint dilate(double t, std::span<const double> x, std::span<const double> y);
/// delta_t^{-1} = delta_{1/t}; t = 0 is an input error.
GradedPoint dilate_inverse(double t, std::span<const double> x, std::span<const double> y);

/// A chart change phi(x, y) = (f(x, y), g(x, y)) fixing the origin. It is
/// foliated when g does not depend on x; the controls in the tests are not.
struct ChartMap {
  using Component = std::function<std::vector<double>(std::span<const double>, std::span<const double>)>;
  FoliationSplit split;
  Component f;
  Component g;
  std::string name;
};

/// phi(x, y) = (f(x, y), g(y)).
ChartMap foliated_diffeo(FoliationSplit split, ChartMap::Component f,
                         std::function<std::vector<double>(std::span<const double>)> g,
                         std::string name = {});

struct LawSample {
  double t = 0.0;
  double deviation = 0.0;  ///< max over points of |delta_t^{-1} phi delta_t - L|
};

struct LawReport {
  std::string name;
  Eigen::MatrixXd Dx_f;    ///< p x p leafwise Jacobian of f at 0
  Eigen::MatrixXd Dy_g;    ///< q x q Jacobian of g at 0
  std::vector<LawSample> samples;
  double order = 0.0;      ///< least-squares slope of log deviation vs log t
  bool exact = false;      ///< deviation at roundoff level for every t
  bool passed = false;     ///< exact or order >= min_order
  double min_order = 0.8;
};

/// Compares delta_t^{-1} phi delta_t with its limit L(x, y) = (D_x f(0) x, D_y g(0) y)
/// over a decreasing t-list in (0, 0.5]. Jacobians by central differences.
LawReport coordinate_law_check(const ChartMap& phi, const std::vector<GradedPoint>& points,
                               std::span<const double> ts, double fd_step = 1e-4);

/// Default t-list 0.5, 0.25, ..., 0.5 / 2^(count-1).
std::vector<double> law_t_list(int count = 6);

/// Top weighted-order part of P with coefficients evaluated at x0.
DiffOp freeze_coefficients(const DiffOp& P, std::span<const double> x0);

struct HomotopyPoint {
  double t = 0.0;
  double scale = 0.0;            ///< t^d
  double distance_to_limit = 0.0;  ///< ||e_t - e_inf||, spectral
  double upper_left = 0.0;       ///< ||UL(e_t) - Pi_ker P||
  double upper_right = 0.0;      ///< ||UR(e_t)||
  double lower_right = 0.0;      ///< ||LR(e_t) - (1 - Pi_ker P^*)||
  double trace_upper_left = 0.0;          ///< Tr UL(e_t(P))
  double trace_upper_left_adjoint = 0.0;  ///< Tr UL(e_t(P^t))
  double trace_shifted = 0.0;    ///< Tr(e_t - diag(0, 1)); equals cols - rows
};

struct HomotopyTrace {
  int K = 0;
  int degree = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  int dim_ker = 0;
  int dim_coker = 0;              ///< from the Galerkin matrix of P^t
  std::vector<HomotopyPoint> points;
  double lipschitz = 0.0;         ///< max ||e_{t1} - e_{t2}|| / |t1 - t2| on consecutive t
  double monotone_from = 8.0;
  bool monotone = false;          ///< distance non-increasing for t >= monotone_from
  bool flagged = false;           ///< !monotone
  double trace_index = 0.0;       ///< Tr UL(e_t(P)) - Tr UL(e_t(P^t)) at the largest t
  bool trace_consistent = false;  ///< |trace_index - (dim_ker - dim_coker)| < 1e-2
};

/// Graph projections of the scaled truncations t^d G(P) for a sorted t-grid,
/// evaluated through the SVD of G(P) (each singular pair spans an invariant
/// 2x2 block). Kernel projections use the relative rule of opt.
HomotopyTrace projection_homotopy(const DiffOp& P, std::span<const double> ts, int K,
                                  const IndexOptions& opt = {});

/// Default geometric grid 1, 2, 4, ..., 64.
std::vector<double> homotopy_t_grid(double t_max = 64.0);

/// Dense graph projection of scale * M, used to cross-check the spectral path.
CMatrix dense_scaled_projection(const CMatrix& M, double scale);

void write_homotopy_csv(std::ostream& os, const HomotopyTrace& h);

}  // namespace folidx
