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

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "folidx/trigpoly.hpp"

namespace folidx {

/// Leafwise dimension p (the span of the first p coordinate fields) and
/// transverse dimension q. q = 0 is the degenerate foliation H = TM.
struct FoliationSplit {
  int p = 0;
  int q = 0;

  int n() const { return p + q; }
  void validate() const;
  friend bool operator==(const FoliationSplit&, const FoliationSplit&) = default;
};

/// Nonnegative derivative exponents alpha = (alpha_1, ..., alpha_n).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex unit(int n, int axis, int power = 1);

  int size() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[i]; }
  const std::vector<int>& exponents() const { return e_; }
  /// Plain degree |alpha|.
  int degree() const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> e_;
};

/// ||alpha|| = alpha_1 + ... + alpha_p + 2 (alpha_{p+1} + ... + alpha_n).
int weighted_order(const MultiIndex& alpha, const FoliationSplit& split);

/// All multi-indices of length split.n() with weighted order <= d, in
/// lexicographic order.
std::vector<MultiIndex> multi_indices_up_to(int d, const FoliationSplit& split);

/// Differential operator P = sum_alpha a_alpha(x) d^alpha in standard form
/// (coefficients on the left), mapping C^{m_E}-valued to C^{m_F}-valued
/// functions on T^n. Each coefficient is an m_F x m_E trig polynomial.
class DiffOp {
 public:
  DiffOp() = default;
  DiffOp(FoliationSplit split, int rank_in, int rank_out);

  static DiffOp identity(FoliationSplit split, int m);
  static DiffOp multiplication(FoliationSplit split, const TrigPoly& a);
  static DiffOp derivative(FoliationSplit split, const MultiIndex& alpha, int m = 1);
  static DiffOp monomial(FoliationSplit split, const MultiIndex& alpha, const TrigPoly& a);

  void add_monomial(const MultiIndex& alpha, const TrigPoly& a);

  const FoliationSplit& split() const { return split_; }
  int dim() const { return split_.n(); }
  int rank_in() const { return rank_in_; }
  int rank_out() const { return rank_out_; }
  const std::map<MultiIndex, TrigPoly>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }
  /// Largest coefficient bandwidth.
  int bandwidth() const;
  TrigPoly coefficient(const MultiIndex& alpha) const;

  /// Same coefficients, read against a different foliation of the same torus.
  DiffOp with_split(FoliationSplit split) const;
  DiffOp pruned(double tol) const;

  friend bool operator==(const DiffOp&, const DiffOp&);

 private:
  FoliationSplit split_;
  int rank_in_ = 0;
  int rank_out_ = 0;
  std::map<MultiIndex, TrigPoly> monomials_;
};

/// Maximal weighted order over stored monomials. Throws on the zero operator.
int op_weighted_order(const DiffOp& P);
/// Maximal plain degree over stored monomials. Throws on the zero operator.
int op_classical_order(const DiffOp& P);

/// Exact Fourier coefficients of P u.
TrigPoly apply(const DiffOp& P, const TrigPoly& u);

DiffOp add(const DiffOp& P, const DiffOp& Q);
DiffOp subtract(const DiffOp& P, const DiffOp& Q);
DiffOp scale(cplx c, const DiffOp& P);
/// P o Q, Leibniz-expanded into standard form.
DiffOp compose(const DiffOp& P, const DiffOp& Q);
/// P^t u = sum_alpha (-1)^{|alpha|} d^alpha (a_alpha^* u), in standard form.
DiffOp formal_adjoint(const DiffOp& P);
/// Block-diagonal operator P (+) Q.
DiffOp direct_sum(const DiffOp& P, const DiffOp& Q);
/// Conjugation U P V^* by constant matrices.
DiffOp conjugate(const CMatrix& U, const DiffOp& P, const CMatrix& V);

/// Largest coefficient difference over all monomials.
double max_coefficient_difference(const DiffOp& P, const DiffOp& Q);

}  // namespace folidx
