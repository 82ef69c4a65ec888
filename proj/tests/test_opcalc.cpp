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

#include <doctest.h>

#include <cmath>

#include "folidx/catalog.hpp"
#include "folidx/errors.hpp"
#include "folidx/opcalc.hpp"
#include "folidx/symbolics.hpp"
#include "support.hpp"

using namespace folidx;
using folidx::testing::random_op;
using folidx::testing::random_poly;

namespace {
const FoliationSplit s11{1, 1}, s20{2, 0}, s21{2, 1};
CMatrix one(cplx v = 1.0) { return CMatrix::Constant(1, 1, v); }
}  // namespace

TEST_CASE("trigpoly evaluation matches the Fourier sum") {
  std::mt19937_64 rng(1);
  const TrigPoly u = random_poly(rng, 2, 2, 1, 2);
  const double x[2] = {0.3, -1.1};
  CMatrix direct = CMatrix::Zero(2, 1);
  for (const auto& [k, c] : u.terms()) direct += c * std::exp(cplx(0.0, k[0] * x[0] + k[1] * x[1]));
  CHECK((u.evaluate(x) - direct).norm() < 1e-13);
  CHECK(u.bandwidth() == 2);
}

TEST_CASE("trigpoly product is frequency convolution") {
  std::mt19937_64 rng(2);
  const TrigPoly a = random_poly(rng, 2, 1, 1, 1), b = random_poly(rng, 2, 1, 1, 2);
  const TrigPoly ab = a * b;
  CHECK(ab.bandwidth() <= 3);
  const double x[2] = {2.1, 0.4};
  CHECK(std::abs(ab.evaluate(x)(0, 0) - a.evaluate(x)(0, 0) * b.evaluate(x)(0, 0)) < 1e-12);
}

TEST_CASE("weighted order") {
  CHECK(weighted_order(MultiIndex({1, 1, 1}), s21) == 4);
  CHECK(weighted_order(MultiIndex({0, 0}), s11) == 0);
  CHECK(weighted_order(MultiIndex({2, 0}), s11) == 2);
  CHECK(weighted_order(MultiIndex({0, 1}), s11) == 2);
  CHECK_THROWS_AS(weighted_order(MultiIndex({1, 1}), s21), InputError);
  // q = 0 reduces to the plain degree
  for (const auto& a : multi_indices_up_to(4, s20)) CHECK(weighted_order(a, s20) == a.degree());
}

TEST_CASE("operator orders") {
  CHECK(op_weighted_order(catalog::heat()) == 2);
  DiffOp P(s11, 1, 1);
  P.add_monomial(MultiIndex({1, 0}), TrigPoly::scalar(2, 1.0));
  P.add_monomial(MultiIndex({0, 1}), TrigPoly::scalar(2, 1.0));
  CHECK(op_weighted_order(P) == 2);
  CHECK(op_weighted_order(P.with_split(s20)) == 1);
  CHECK_THROWS_AS(op_weighted_order(DiffOp(s11, 1, 1)), InputError);
}

TEST_CASE("apply on exponentials") {
  const DiffOp H = catalog::heat();
  for (int k = -3; k <= 3; ++k)
    for (int l = -3; l <= 3; ++l) {
      const TrigPoly u = TrigPoly::exponential({k, l}, one());
      const TrigPoly v = apply(H, u);
      CHECK(max_coefficient_difference(v, TrigPoly::exponential({k, l}, one(cplx(k * k, l)))) < 1e-14);
    }
  const TrigPoly u = TrigPoly::exponential({2, -1}, one(0.5));
  CHECK(apply(DiffOp::identity(s11, 1), u) == u);
  const DiffOp shift = DiffOp::monomial(s11, MultiIndex({1, 0}), TrigPoly::exponential({1, 0}, one()));
  CHECK(max_coefficient_difference(apply(shift, TrigPoly::exponential({3, 0}, one())),
                                   TrigPoly::exponential({4, 0}, one(cplx(0, 3)))) == 0.0);
  CHECK_THROWS_AS(apply(DiffOp::identity(s11, 2), u), InputError);
}

TEST_CASE("compose and Leibniz rule") {
  const DiffOp dx = DiffOp::derivative(s11, MultiIndex({1, 0}));
  CHECK(compose(dx, dx) == DiffOp::derivative(s11, MultiIndex({2, 0})));
  const TrigPoly e = TrigPoly::exponential({1, 0}, one());
  const DiffOp mul = DiffOp::multiplication(s11, e);
  CHECK(compose(mul, dx) == DiffOp::monomial(s11, MultiIndex({1, 0}), e));
  DiffOp expect = DiffOp::monomial(s11, MultiIndex({1, 0}), e);
  expect.add_monomial(MultiIndex({0, 0}), e.scaled(cplx(0, 1)));
  CHECK(compose(dx, mul) == expect);
  CHECK(scale(1.0, catalog::heat()) == catalog::heat());
}

TEST_CASE("compose agrees with sequential application") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const DiffOp P = random_op(rng, s11, 2, 2, 2, 1), Q = random_op(rng, s11, 2, 2, 2, 1);
    const TrigPoly u = random_poly(rng, 2, 2, 1, 2);
    const TrigPoly lhs = apply(compose(P, Q), u), rhs = apply(P, apply(Q, u));
    CHECK(max_coefficient_difference(lhs, rhs) <= 1e-11 * (1.0 + rhs.l2_norm()));
    CHECK(op_weighted_order(compose(P, Q)) <= op_weighted_order(P) + op_weighted_order(Q));
    CHECK(apply(P, u).bandwidth() <= P.bandwidth() + u.bandwidth());
  }
}

TEST_CASE("formal adjoint") {
  const DiffOp dx = DiffOp::derivative(s11, MultiIndex({1, 0}));
  CHECK(formal_adjoint(dx) == scale(-1.0, dx));
  CMatrix a(2, 2);
  a << cplx(1, 2), cplx(0, 1), cplx(3, 0), cplx(-1, -1);
  const DiffOp A = DiffOp::multiplication(s11, TrigPoly::constant(2, a));
  CHECK(formal_adjoint(A) == DiffOp::multiplication(s11, TrigPoly::constant(2, a.adjoint())));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const DiffOp P = random_op(rng, s11, 2, 3, 2, 1);
    const DiffOp Pt = formal_adjoint(P);
    CHECK(Pt.rank_in() == 3);
    CHECK(Pt.rank_out() == 2);
    CHECK(max_coefficient_difference(formal_adjoint(Pt), P) < 1e-13);
    // <Pu, v> = <u, P^t v> in the coefficient pairing
    const TrigPoly u = random_poly(rng, 2, 2, 1, 2), v = random_poly(rng, 2, 3, 1, 2);
    const cplx lhs = inner(apply(P, u), v), rhs = inner(u, apply(Pt, v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-12);
    // weighted symbol of the adjoint is the matrix adjoint
    const WeightedSymbol s = principal_symbol(P), st = principal_symbol(Pt);
    const double x[2] = {0.7, 2.9};
    const FiberPoint f{{0.4}, {-1.3}};
    CHECK((st.evaluate(x, f) - s.evaluate(x, f).adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("rank and split mismatches are input errors") {
  CHECK_THROWS_AS(add(catalog::heat(), DiffOp::identity(s11, 2)), InputError);
  CHECK_THROWS_AS(compose(DiffOp::identity(s11, 2), catalog::heat()), InputError);
  CHECK_THROWS_AS(add(catalog::heat(), DiffOp::identity(s20, 1)), InputError);
  DiffOp P(s11, 1, 1);
  CHECK_THROWS_AS(P.add_monomial(MultiIndex({1, 0}), TrigPoly::constant(2, CMatrix::Identity(2, 2))), InputError);
  CHECK_THROWS_AS(MultiIndex({1, -1}), InputError);
}
