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

#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace folidx {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Integer frequency vector k in Z^n.
using Frequency = std::vector<int>;

/// Matrix-valued finite Fourier series on T^n = (R/2piZ)^n,
///   f(x) = sum_k c_k exp(i k.x),   c_k in C^{rows x cols}.
///
/// Terms whose coefficient becomes exactly zero are dropped, so two
/// polynomials compare equal iff their stored coefficients agree.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(int dim, int rows, int cols);

  static TrigPoly constant(int dim, const CMatrix& c);
  static TrigPoly scalar(int dim, cplx c);
  static TrigPoly exponential(const Frequency& k, const CMatrix& c);

  int dim() const { return dim_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::map<Frequency, CMatrix>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// max_k |k|_inf over stored terms (0 for the zero polynomial).
  int bandwidth() const;
  CMatrix coefficient(const Frequency& k) const;
  void add_term(const Frequency& k, const CMatrix& c);

  CMatrix evaluate(std::span<const double> x) const;

  /// d^alpha f, termwise multiplication by (ik)^alpha.
  TrigPoly derivative(std::span<const int> alpha) const;
  /// Pointwise conjugate transpose: c_k -> c_{-k}^*.
  TrigPoly adjoint() const;
  /// Scalar (1x1) polynomial promoted to f(x) * I_m.
  TrigPoly broadcast(int m) const;

  TrigPoly scaled(cplx s) const;
  /// Drops terms whose largest entry is at most tol (tol = 0 keeps all nonzero terms).
  TrigPoly pruned(double tol) const;

  /// Exact L2 pairing sum_k tr(c_k(a)^* c_k(b)), with |e^{ik.x}| = 1.
  friend cplx inner(const TrigPoly& a, const TrigPoly& b);
  double l2_norm() const;

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b);
  /// Pointwise product: frequency convolution with matrix products.
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend bool operator==(const TrigPoly& a, const TrigPoly& b);

 private:
  int dim_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::map<Frequency, CMatrix> terms_;
};

/// Largest absolute coefficient difference; infinity if shapes differ.
double max_coefficient_difference(const TrigPoly& a, const TrigPoly& b);

}  // namespace folidx
