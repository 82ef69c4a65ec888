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
#include <map>
#include <vector>

#include "folidx/opcalc.hpp"

namespace folidx {

/// Covector (xi, eta) in H^* (+) N^*.
struct FiberPoint {
  std::vector<double> xi;
  std::vector<double> eta;

  /// rho = (|xi|^4 + |eta|^2)^{1/4}.
  double weighted_radius() const;
  /// Graded dilation (xi, eta) -> (lambda xi, lambda^2 eta).
  FiberPoint dilated(double lambda) const;
  /// Dilation onto the weighted sphere rho = 1 (identity at the origin).
  FiberPoint normalized() const;
};

/// Weighted-homogeneous principal part
///   sigma(x, xi, eta) = sum_{||alpha|| = d} a_alpha(x) (i xi, i eta)^alpha.
class WeightedSymbol {
 public:
  WeightedSymbol() = default;
  WeightedSymbol(FoliationSplit split, int degree, int rank_in, int rank_out);

  void add_monomial(const MultiIndex& alpha, const TrigPoly& a);

  const FoliationSplit& split() const { return split_; }
  int degree() const { return degree_; }
  int rank_in() const { return rank_in_; }
  int rank_out() const { return rank_out_; }
  const std::map<MultiIndex, TrigPoly>& monomials() const { return monomials_; }

  /// Coefficients frozen at one base point; cheap repeated fiber evaluation.
  class Frozen {
   public:
    CMatrix at(const FiberPoint& f) const;
    CMatrix at(std::span<const double> fiber) const;

   private:
    friend class WeightedSymbol;
    FoliationSplit split_;
    int rows_ = 0, cols_ = 0;
    std::vector<std::pair<std::vector<int>, CMatrix>> terms_;
  };
  Frozen frozen(std::span<const double> x) const;

  CMatrix evaluate(std::span<const double> x, const FiberPoint& f) const;

 private:
  FoliationSplit split_;
  int degree_ = 0;
  int rank_in_ = 0;
  int rank_out_ = 0;
  std::map<MultiIndex, TrigPoly> monomials_;
};

/// Keeps exactly the monomials of maximal weighted order.
WeightedSymbol principal_symbol(const DiffOp& P);
/// Classical principal symbol (|alpha| = classical order), as a degree-d
/// weighted symbol of the degenerate split (n, 0).
WeightedSymbol classical_principal_symbol(const DiffOp& P);
/// Unitary conjugation U sigma U^*.
WeightedSymbol conjugate(const CMatrix& U, const WeightedSymbol& s);

struct HomogeneityReport {
  int samples = 0;
  double max_relative_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Tests sigma(x, lambda xi, lambda^2 eta) = lambda^d sigma(x, xi, eta) at
/// random samples with lambda in [lambda_min, lambda_max].
HomogeneityReport check_homogeneity(const WeightedSymbol& s, int samples, double lambda_min,
                                    double lambda_max, std::uint64_t seed,
                                    double tolerance = 1e-10);

struct InvertibilityPlan {
  double tolerance = 1e-6;
  int angular = 32;
  int base = 16;
  int max_refinements = 3;
  double stability = 0.10;
};

struct InvertibilityCertificate {
  bool passed = false;
  bool converged = false;
  int degree = 0;
  double s_min = 0.0;
  double tolerance = 0.0;
  std::vector<double> witness_x;
  FiberPoint witness_fiber;
  int angular = 0;
  int base = 0;
  std::vector<double> history;
};

/// Scans the weighted sphere times a base grid for the smallest singular
/// value of sigma, doubling both resolutions until the minimum moves by
/// less than plan.stability (relative). Passes iff converged and
/// s_min >= plan.tolerance. For q >= 1 a passing certificate forces even
/// degree; an odd one raises InvariantViolation.
InvertibilityCertificate check_invertibility(const WeightedSymbol& s,
                                             const InvertibilityPlan& plan = {});

/// Points on the weighted sphere from an angular grid on the unit sphere
/// of R^{p+q}, pulled onto rho = 1 by the graded dilation.
std::vector<FiberPoint> weighted_sphere_grid(const FoliationSplit& split, int angular);

/// Orthogonal projection of C^m (+) C^m onto the graph {(v, Tv)}:
///   [[A, A T^*], [T A, T A T^*]],  A = (1 + T^*T)^{-1}.
CMatrix graph_projection(const CMatrix& T);
/// Same projection via [[A, T^*(1 + TT^*)^{-1}], [T A, 1 - (1 + TT^*)^{-1}]].
CMatrix graph_projection_alternate(const CMatrix& T);
/// diag(0, 1_m).
CMatrix reference_projection(int m);

struct DecayReport {
  double exponent = 0.0;  ///< fitted slope of -log||e - diag(0,1)|| vs log rho
  double constant = 0.0;  ///< max ||e - diag(0,1)|| rho^d over samples
  bool passed = false;
  std::vector<std::pair<double, double>> samples;  ///< (rho, max deviation)
};

/// Decay of the projection field toward diag(0,1) along rho in radii.
DecayReport measure_decay(const WeightedSymbol& s, std::span<const double> radii, int directions,
                          std::uint64_t seed);

struct ProjFieldGrid {
  int base_nodes = 16;
  std::vector<FiberPoint> fiber_points;
};

/// Graph projections of sigma sampled over (uniform base grid) x (fiber points).
/// values are row-major: index = base_index * fiber_points.size() + fiber_index.
struct ProjField {
  int m = 0;
  FoliationSplit split;
  int base_nodes = 0;
  std::vector<std::vector<double>> base_points;
  std::vector<FiberPoint> fiber_points;
  std::vector<CMatrix> values;
  double max_idempotence_defect = 0.0;
  double max_selfadjoint_defect = 0.0;
  double max_trace_defect = 0.0;
  DecayReport decay;
};

/// Refuses (UncertifiedError) unless cert.passed. Checks the projection
/// invariants at every node (InvariantViolation on failure) and records
/// the decay toward diag(0,1).
ProjField symbol_projection_field(const WeightedSymbol& s, const ProjFieldGrid& grid,
                                  const InvertibilityCertificate& cert, std::uint64_t seed = 7);

}  // namespace folidx
