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

#include "folidx/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "folidx/errors.hpp"

namespace folidx {

void FoliationSplit::validate() const {
  if (p < 0 || q < 0) throw InputError("FoliationSplit: p and q must be nonnegative");
  if (p + q < 1) throw InputError("FoliationSplit: p + q must be at least 1");
}

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  for (int v : e_)
    if (v < 0) throw InputError("MultiIndex: exponents must be nonnegative");
}

MultiIndex MultiIndex::unit(int n, int axis, int power) {
  if (axis < 0 || axis >= n) throw InputError("MultiIndex::unit: axis out of range");
  std::vector<int> e(n, 0);
  e[axis] = power;
  return MultiIndex(std::move(e));
}

int MultiIndex::degree() const {
  int d = 0;
  for (int v : e_) d += v;
  return d;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw InputError("MultiIndex: length mismatch in sum");
  std::vector<int> e(a.size());
  for (int i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
  return MultiIndex(std::move(e));
}

int weighted_order(const MultiIndex& alpha, const FoliationSplit& split) {
  split.validate();
  if (alpha.size() != split.n())
    throw InputError("weighted_order: multi-index length " + std::to_string(alpha.size()) +
                     " does not match n = " + std::to_string(split.n()));
  int w = 0;
  for (int i = 0; i < split.n(); ++i) w += (i < split.p ? 1 : 2) * alpha[i];
  return w;
}

std::vector<MultiIndex> multi_indices_up_to(int d, const FoliationSplit& split) {
  split.validate();
  std::vector<MultiIndex> out;
  std::vector<int> e(split.n(), 0);
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == split.n()) {
      out.emplace_back(e);
      return;
    }
    const int w = axis < split.p ? 1 : 2;
    for (int v = 0; v * w <= budget; ++v) {
      e[axis] = v;
      rec(axis + 1, budget - v * w);
    }
    e[axis] = 0;
  };
  if (d >= 0) rec(0, d);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

/// Calls f(gamma, C(alpha, gamma)) for every gamma <= alpha.
void for_each_sub_index(const MultiIndex& alpha,
                        const std::function<void(const MultiIndex&, double)>& f) {
  const int n = alpha.size();
  std::vector<int> g(n, 0);
  std::function<void(int, double)> rec = [&](int axis, double c) {
    if (axis == n) {
      f(MultiIndex(g), c);
      return;
    }
    for (int v = 0; v <= alpha[axis]; ++v) {
      g[axis] = v;
      rec(axis + 1, c * binomial(alpha[axis], v));
    }
    g[axis] = 0;
  };
  rec(0, 1.0);
}

MultiIndex difference(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> e(a.size());
  for (int i = 0; i < a.size(); ++i) e[i] = a[i] - b[i];
  return MultiIndex(std::move(e));
}

void require_compatible(const DiffOp& P, const DiffOp& Q, const char* what) {
  if (!(P.split() == Q.split())) throw InputError(std::string(what) + ": foliation split mismatch");
  if (P.rank_in() != Q.rank_in() || P.rank_out() != Q.rank_out())
    throw InputError(std::string(what) + ": rank mismatch");
}

}  // namespace

DiffOp::DiffOp(FoliationSplit split, int rank_in, int rank_out)
    : split_(split), rank_in_(rank_in), rank_out_(rank_out) {
  split_.validate();
  if (rank_in < 1 || rank_out < 1) throw InputError("DiffOp: ranks must be positive");
}

DiffOp DiffOp::identity(FoliationSplit split, int m) {
  return monomial(split, MultiIndex::zero(split.n()),
                  TrigPoly::constant(split.n(), CMatrix::Identity(m, m)));
}

DiffOp DiffOp::multiplication(FoliationSplit split, const TrigPoly& a) {
  return monomial(split, MultiIndex::zero(split.n()), a);
}

DiffOp DiffOp::derivative(FoliationSplit split, const MultiIndex& alpha, int m) {
  return monomial(split, alpha, TrigPoly::constant(split.n(), CMatrix::Identity(m, m)));
}

DiffOp DiffOp::monomial(FoliationSplit split, const MultiIndex& alpha, const TrigPoly& a) {
  DiffOp P(split, a.cols(), a.rows());
  P.add_monomial(alpha, a);
  return P;
}

void DiffOp::add_monomial(const MultiIndex& alpha, const TrigPoly& a) {
  if (alpha.size() != dim()) throw InputError("DiffOp::add_monomial: multi-index length mismatch");
  if (a.dim() != dim()) throw InputError("DiffOp::add_monomial: coefficient dimension mismatch");
  if (a.rows() != rank_out_ || a.cols() != rank_in_)
    throw InputError("DiffOp::add_monomial: coefficient must be m_F x m_E");
  if (a.is_zero()) return;
  auto it = monomials_.find(alpha);
  if (it == monomials_.end()) {
    monomials_.emplace(alpha, a);
    return;
  }
  it->second = it->second + a;
  if (it->second.is_zero()) monomials_.erase(it);
}

int DiffOp::bandwidth() const {
  int b = 0;
  for (const auto& [alpha, a] : monomials_) b = std::max(b, a.bandwidth());
  return b;
}

TrigPoly DiffOp::coefficient(const MultiIndex& alpha) const {
  auto it = monomials_.find(alpha);
  if (it == monomials_.end()) return TrigPoly(dim(), rank_out_, rank_in_);
  return it->second;
}

DiffOp DiffOp::with_split(FoliationSplit split) const {
  if (split.n() != dim()) throw InputError("DiffOp::with_split: dimension mismatch");
  DiffOp out = *this;
  out.split_ = split;
  out.split_.validate();
  return out;
}

DiffOp DiffOp::pruned(double tol) const {
  DiffOp out(split_, rank_in_, rank_out_);
  for (const auto& [alpha, a] : monomials_) out.add_monomial(alpha, a.pruned(tol));
  return out;
}

bool operator==(const DiffOp& a, const DiffOp& b) {
  return a.split_ == b.split_ && a.rank_in_ == b.rank_in_ && a.rank_out_ == b.rank_out_ &&
         a.monomials_ == b.monomials_;
}

int op_weighted_order(const DiffOp& P) {
  if (P.is_zero()) throw InputError("op_weighted_order: the zero operator has no order");
  int d = 0;
  for (const auto& [alpha, a] : P.monomials()) d = std::max(d, weighted_order(alpha, P.split()));
  return d;
}

int op_classical_order(const DiffOp& P) {
  if (P.is_zero()) throw InputError("op_classical_order: the zero operator has no order");
  int d = 0;
  for (const auto& [alpha, a] : P.monomials()) d = std::max(d, alpha.degree());
  return d;
}

TrigPoly apply(const DiffOp& P, const TrigPoly& u) {
  if (u.dim() != P.dim() || u.rows() != P.rank_in() || u.cols() != 1)
    throw InputError("apply: section must be an m_E x 1 trig polynomial on T^n");
  TrigPoly out(P.dim(), P.rank_out(), 1);
  for (const auto& [alpha, a] : P.monomials())
    out = out + a * u.derivative(alpha.exponents());
  return out;
}

DiffOp add(const DiffOp& P, const DiffOp& Q) {
  require_compatible(P, Q, "add");
  DiffOp out = P;
  for (const auto& [alpha, b] : Q.monomials()) out.add_monomial(alpha, b);
  return out;
}

DiffOp subtract(const DiffOp& P, const DiffOp& Q) { return add(P, scale(-1.0, Q)); }

DiffOp scale(cplx c, const DiffOp& P) {
  DiffOp out(P.split(), P.rank_in(), P.rank_out());
  for (const auto& [alpha, a] : P.monomials()) out.add_monomial(alpha, a.scaled(c));
  return out;
}

DiffOp compose(const DiffOp& P, const DiffOp& Q) {
  if (!(P.split() == Q.split())) throw InputError("compose: foliation split mismatch");
  if (P.rank_in() != Q.rank_out()) throw InputError("compose: rank mismatch (P.m_E != Q.m_F)");
  DiffOp out(P.split(), Q.rank_in(), P.rank_out());
  // a d^alpha (b d^beta) = sum_{gamma <= alpha} C(alpha,gamma) a (d^{alpha-gamma} b) d^{gamma+beta}
  for (const auto& [alpha, a] : P.monomials())
    for (const auto& [beta, b] : Q.monomials())
      for_each_sub_index(alpha, [&](const MultiIndex& gamma, double c) {
        TrigPoly db = b.derivative(difference(alpha, gamma).exponents());
        if (db.is_zero()) return;
        out.add_monomial(gamma + beta, (a * db).scaled(c));
      });
  return out;
}

DiffOp formal_adjoint(const DiffOp& P) {
  DiffOp out(P.split(), P.rank_out(), P.rank_in());
  for (const auto& [alpha, a] : P.monomials()) {
    const TrigPoly astar = a.adjoint();
    const double sign = (alpha.degree() % 2 == 0) ? 1.0 : -1.0;
    for_each_sub_index(alpha, [&](const MultiIndex& gamma, double c) {
      TrigPoly d = astar.derivative(difference(alpha, gamma).exponents());
      if (d.is_zero()) return;
      out.add_monomial(gamma, d.scaled(sign * c));
    });
  }
  return out;
}

DiffOp direct_sum(const DiffOp& P, const DiffOp& Q) {
  if (!(P.split() == Q.split())) throw InputError("direct_sum: foliation split mismatch");
  const int n = P.dim();
  DiffOp out(P.split(), P.rank_in() + Q.rank_in(), P.rank_out() + Q.rank_out());
  auto embed = [&](const TrigPoly& a, int r0, int c0) {
    TrigPoly t(n, out.rank_out(), out.rank_in());
    for (const auto& [k, c] : a.terms()) {
      CMatrix big = CMatrix::Zero(out.rank_out(), out.rank_in());
      big.block(r0, c0, c.rows(), c.cols()) = c;
      t.add_term(k, big);
    }
    return t;
  };
  for (const auto& [alpha, a] : P.monomials()) out.add_monomial(alpha, embed(a, 0, 0));
  for (const auto& [alpha, b] : Q.monomials())
    out.add_monomial(alpha, embed(b, P.rank_out(), P.rank_in()));
  return out;
}

DiffOp conjugate(const CMatrix& U, const DiffOp& P, const CMatrix& V) {
  if (U.cols() != P.rank_out() || V.cols() != P.rank_in())
    throw InputError("conjugate: matrix shapes do not match operator ranks");
  const int n = P.dim();
  DiffOp out(P.split(), static_cast<int>(V.rows()), static_cast<int>(U.rows()));
  CMatrix Vh = V.adjoint();
  for (const auto& [alpha, a] : P.monomials()) {
    TrigPoly t(n, out.rank_out(), out.rank_in());
    for (const auto& [k, c] : a.terms()) t.add_term(k, U * c * Vh);
    out.add_monomial(alpha, t);
  }
  return out;
}

double max_coefficient_difference(const DiffOp& P, const DiffOp& Q) {
  if (!(P.split() == Q.split()) || P.rank_in() != Q.rank_in() || P.rank_out() != Q.rank_out())
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  DiffOp diff = subtract(P, Q);
  for (const auto& [alpha, a] : diff.monomials())
    for (const auto& [k, c] : a.terms()) d = std::max(d, c.cwiseAbs().maxCoeff());
  return d;
}

}  // namespace folidx
