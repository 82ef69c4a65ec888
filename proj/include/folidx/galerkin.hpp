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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "folidx/opcalc.hpp"
#include "folidx/symbolics.hpp"

namespace folidx {

/// Fourier modes k in Z^n with |k|_inf <= K, in lexicographic order.
class ModeSet {
 public:
  ModeSet() = default;
  ModeSet(int n, int K);

  int dim() const { return n_; }
  int cutoff() const { return K_; }
  std::size_t size() const { return size_; }
  /// Position of k, or std::nullopt when |k|_inf > K.
  std::optional<std::size_t> index(std::span<const int> k) const;
  Frequency mode(std::size_t i) const;

 private:
  int n_ = 0;
  int K_ = 0;
  std::size_t size_ = 0;
};

/// Exact matrix of P from modes |k| <= K into modes |k| <= K + B(P).
/// Column m_E * i + c is the coefficient vector of P (e^{i k_i.x} e_c).
struct GalerkinMatrix {
  int K = 0;
  int K_codomain = 0;
  int rank_in = 0;
  int rank_out = 0;
  ModeSet domain;
  ModeSet codomain;
  CMatrix matrix;
};

GalerkinMatrix galerkin_matrix(const DiffOp& P, int K);
/// Coefficient vector (domain layout) of a section with bandwidth <= K.
CVector to_coefficients(const TrigPoly& u, const ModeSet& modes);
TrigPoly from_coefficients(const CVector& v, const ModeSet& modes, int rank);

/// Square compression onto the domain modes. Its small-singular-value count
/// equals that of its adjoint, so it can never detect an index; it exists
/// only to demonstrate that obstruction.
CMatrix square_compression(const GalerkinMatrix& G);

enum class ThresholdRule {
  Relative,  ///< count s < relative_threshold * s_max
  Gap,       ///< count below the largest neighbour ratio, if that ratio exceeds 1 / gap_ceiling
};

struct IndexOptions {
  double relative_threshold = 1e-8;
  double gap_ceiling = 1e-4;
  double separation_factor = 10.0;
  ThresholdRule rule = ThresholdRule::Relative;
  bool certify = true;
  InvertibilityPlan plan;
};

struct SpectrumCount {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int relative = 0;           ///< count under the relative rule
  int gap = 0;                ///< count under the gap rule
  double tau = 0.0;           ///< relative threshold value
  double s_max = 0.0;
  double last_counted = 0.0;  ///< largest counted singular value (selected rule)
  double first_uncounted = 0.0;
  std::vector<double> smallest;  ///< a few smallest singular values, ascending
};

/// Counts numerically-zero singular values (descending input), including the
/// cols - rows structural kernel of a wide matrix.
SpectrumCount count_kernel(const Eigen::VectorXd& singular_values_desc, std::size_t rows,
                           std::size_t cols, const IndexOptions& opt);

struct SweepEntry {
  int K = 0;
  SpectrumCount kernel;     ///< from galerkin_matrix(P, K)
  SpectrumCount cokernel;   ///< from galerkin_matrix(formal_adjoint(P), K)
  int dim_ker = 0;
  int dim_coker = 0;
  bool rules_agree = false;
  bool separated = false;   ///< first uncounted > separation_factor * tau on both sides
};

/// Analytic index from separate kernel and cokernel counts on exact
/// rectangular truncations. stable is set only when the counts are
/// identical, rule-consistent and separated over the last three cutoffs.
struct IndexReport {
  bool certified = false;
  bool stable = false;
  std::optional<int> index;
  int dim_ker = 0;
  int dim_coker = 0;
  ThresholdRule rule = ThresholdRule::Relative;
  std::string cokernel_source = "formal_adjoint";
  std::string cause;
  InvertibilityCertificate certificate;
  std::vector<SweepEntry> sweep;
};

IndexReport numerical_index(const DiffOp& P, std::span<const int> cutoffs,
                            const IndexOptions& opt = {});

/// ||u||^2_{W^d} = sum_k |u_k|^2 sum_{||alpha|| <= d} k^{2 alpha}.
double weighted_sobolev_norm_squared(const TrigPoly& u, int d, const FoliationSplit& split);
double weighted_sobolev_norm(const TrigPoly& u, int d, const FoliationSplit& split);

struct ProbeEntry {
  int K = 0;
  double c_hat = 0.0;        ///< max over every probe
  double c_random = 0.0;     ///< max over the random Gaussian probes
  double c_modes = 0.0;      ///< max over single Fourier-mode probes
  Frequency worst_mode;
};

struct ProbeReport {
  std::vector<ProbeEntry> sweep;
  double variation = 0.0;    ///< (max - min) / max of c_hat over the sweep
  double growth = 0.0;       ///< c_hat(last) / c_hat(first)
};

/// Empirical constant of ||Au|| <= C (||Pu|| + ||u||) over trig polynomials of
/// bandwidth <= K: `trials` seeded Gaussian polynomials plus every single mode.
ProbeReport apriori_probe(const DiffOp& P, const DiffOp& A, int trials,
                          std::span<const int> cutoffs, std::uint64_t seed);

}  // namespace folidx
