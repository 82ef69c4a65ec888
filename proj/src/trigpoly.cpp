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

#include "folidx/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "folidx/errors.hpp"

namespace folidx {

namespace {

bool exactly_zero(const CMatrix& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c.data()[i] != cplx(0.0, 0.0)) return false;
  return true;
}

void require_same_shape(const TrigPoly& a, const TrigPoly& b, const char* what) {
  if (a.dim() != b.dim() || a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError(std::string(what) + ": trig polynomial shape mismatch");
}

}  // namespace

TrigPoly::TrigPoly(int dim, int rows, int cols) : dim_(dim), rows_(rows), cols_(cols) {
  if (dim < 1 || rows < 1 || cols < 1)
    throw InputError("TrigPoly: dimension and ranks must be positive");
}

TrigPoly TrigPoly::constant(int dim, const CMatrix& c) {
  TrigPoly t(dim, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  t.add_term(Frequency(dim, 0), c);
  return t;
}

TrigPoly TrigPoly::scalar(int dim, cplx c) {
  CMatrix m(1, 1);
  m(0, 0) = c;
  return constant(dim, m);
}

TrigPoly TrigPoly::exponential(const Frequency& k, const CMatrix& c) {
  TrigPoly t(static_cast<int>(k.size()), static_cast<int>(c.rows()),
             static_cast<int>(c.cols()));
  t.add_term(k, c);
  return t;
}

int TrigPoly::bandwidth() const {
  int b = 0;
  for (const auto& [k, c] : terms_)
    for (int ki : k) b = std::max(b, std::abs(ki));
  return b;
}

CMatrix TrigPoly::coefficient(const Frequency& k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) return CMatrix::Zero(rows_, cols_);
  return it->second;
}

void TrigPoly::add_term(const Frequency& k, const CMatrix& c) {
  if (static_cast<int>(k.size()) != dim_)
    throw InputError("TrigPoly::add_term: frequency has wrong dimension");
  if (c.rows() != rows_ || c.cols() != cols_)
    throw InputError("TrigPoly::add_term: coefficient has wrong shape");
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (!exactly_zero(c)) terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (exactly_zero(it->second)) terms_.erase(it);
}

CMatrix TrigPoly::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw InputError("TrigPoly::evaluate: point has wrong dimension");
  CMatrix out = CMatrix::Zero(rows_, cols_);
  for (const auto& [k, c] : terms_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += k[i] * x[i];
    out += std::polar(1.0, phase) * c;
  }
  return out;
}

TrigPoly TrigPoly::derivative(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_)
    throw InputError("TrigPoly::derivative: multi-index has wrong length");
  TrigPoly out(dim_, rows_, cols_);
  for (const auto& [k, c] : terms_) {
    cplx f(1.0, 0.0);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < alpha[i]; ++j) f *= cplx(0.0, k[i]);
    if (f != cplx(0.0, 0.0)) out.add_term(k, f * c);
  }
  return out;
}

TrigPoly TrigPoly::adjoint() const {
  TrigPoly out(dim_, cols_, rows_);
  for (const auto& [k, c] : terms_) {
    Frequency mk(k.size());
    std::transform(k.begin(), k.end(), mk.begin(), [](int v) { return -v; });
    out.add_term(mk, c.adjoint());
  }
  return out;
}

TrigPoly TrigPoly::broadcast(int m) const {
  if (rows_ != 1 || cols_ != 1) throw InputError("TrigPoly::broadcast: not a scalar polynomial");
  TrigPoly out(dim_, m, m);
  for (const auto& [k, c] : terms_) out.add_term(k, c(0, 0) * CMatrix::Identity(m, m));
  return out;
}

TrigPoly TrigPoly::scaled(cplx s) const {
  TrigPoly out(dim_, rows_, cols_);
  for (const auto& [k, c] : terms_) out.add_term(k, s * c);
  return out;
}

TrigPoly TrigPoly::pruned(double tol) const {
  TrigPoly out(dim_, rows_, cols_);
  for (const auto& [k, c] : terms_)
    if (c.cwiseAbs().maxCoeff() > tol) out.terms_.emplace(k, c);
  return out;
}

cplx inner(const TrigPoly& a, const TrigPoly& b) {
  require_same_shape(a, b, "inner");
  cplx s(0.0, 0.0);
  for (const auto& [k, ca] : a.terms_) {
    auto it = b.terms_.find(k);
    if (it != b.terms_.end()) s += (ca.adjoint() * it->second).trace();
  }
  return s;
}

double TrigPoly::l2_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c.squaredNorm();
  return std::sqrt(s);
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  require_same_shape(a, b, "operator+");
  TrigPoly out = a;
  for (const auto& [k, c] : b.terms_) out.add_term(k, c);
  return out;
}

TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
  require_same_shape(a, b, "operator-");
  TrigPoly out = a;
  for (const auto& [k, c] : b.terms_) out.add_term(k, -c);
  return out;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  if (a.dim_ != b.dim_ || a.cols_ != b.rows_)
    throw InputError("operator*: incompatible trig polynomial shapes");
  TrigPoly out(a.dim_, a.rows_, b.cols_);
  Frequency k(a.dim_);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      for (int i = 0; i < a.dim_; ++i) k[i] = ka[i] + kb[i];
      out.add_term(k, ca * cb);
    }
  return out;
}

bool operator==(const TrigPoly& a, const TrigPoly& b) {
  if (a.dim_ != b.dim_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (ia->first != ib->first || ia->second != ib->second) return false;
  return true;
}

double max_coefficient_difference(const TrigPoly& a, const TrigPoly& b) {
  if (a.dim() != b.dim() || a.rows() != b.rows() || a.cols() != b.cols())
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  TrigPoly diff = a - b;
  for (const auto& [k, c] : diff.terms()) d = std::max(d, c.cwiseAbs().maxCoeff());
  return d;
}

}  // namespace folidx
