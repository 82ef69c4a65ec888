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
#include <random>

#include "folidx/catalog.hpp"
#include "folidx/errors.hpp"
#include "folidx/galerkin.hpp"
#include "folidx/linalg.hpp"
#include "support.hpp"

using namespace folidx;

namespace {
const FoliationSplit s11{1, 1};
CMatrix one(cplx v = 1.0) { return CMatrix::Constant(1, 1, v); }
}  // namespace

TEST_CASE("mode set ordering round-trips") {
  const ModeSet ms(3, 2);
  CHECK(ms.size() == 125);
  for (std::size_t i = 0; i < ms.size(); ++i) CHECK(*ms.index(ms.mode(i)) == i);
  const int out[3] = {3, 0, 0};
  CHECK_FALSE(ms.index(out).has_value());
}

TEST_CASE("galerkin matrix of the heat operator is diagonal with k^2 + il") {
  const GalerkinMatrix G = galerkin_matrix(catalog::heat(), 4);
  CHECK(G.matrix.cols() == 81);
  CHECK(G.matrix.rows() == 81);
  for (std::size_t i = 0; i < G.domain.size(); ++i) {
    const Frequency k = G.domain.mode(i);
    const auto j = static_cast<Eigen::Index>(i);
    CHECK(G.matrix(j, j) == cplx(k[0] * k[0], k[1]));
    CHECK(std::abs(G.matrix.col(j).squaredNorm() - std::norm(cplx(k[0] * k[0], k[1]))) < 1e-12);
  }
}

TEST_CASE("multiplication by e^{ix} is a shift") {
  const DiffOp P = DiffOp::multiplication(s11, TrigPoly::exponential({1, 0}, one()));
  const GalerkinMatrix G = galerkin_matrix(P, 3);
  CHECK(G.K_codomain == 4);
  for (std::size_t i = 0; i < G.domain.size(); ++i) {
    Frequency k = G.domain.mode(i);
    k[0] += 1;
    const auto row = static_cast<Eigen::Index>(*G.codomain.index(k));
    CHECK(G.matrix(row, static_cast<Eigen::Index>(i)) == cplx(1.0));
    CHECK(G.matrix.col(static_cast<Eigen::Index>(i)).norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("galerkin matrix represents P exactly on its domain") {
  std::mt19937_64 rng(5);
  const DiffOp P = folidx::testing::random_op(rng, s11, 2, 2, 2, 1);
  const GalerkinMatrix G = galerkin_matrix(P, 3);
  const TrigPoly u = folidx::testing::random_poly(rng, 2, 2, 1, 3);
  const CVector Mu = G.matrix * to_coefficients(u, G.domain);
  const TrigPoly Pu = apply(P, u);
  CHECK((Mu - to_coefficients(Pu, G.codomain)).norm() < 1e-12 * (1 + Mu.norm()));
  CHECK(max_coefficient_difference(from_coefficients(to_coefficients(u, G.domain), G.domain, 2), u) == 0.0);
  CHECK_THROWS_AS(galerkin_matrix(P, 0), InputError);
  CHECK_THROWS_AS(galerkin_matrix(DiffOp(s11, 1, 1), 3), InputError);
}

TEST_CASE("heat operator index via separate kernel and cokernel counts") {
  const std::vector<int> Ks{8, 12, 16};
  const IndexReport r = numerical_index(catalog::heat(), Ks);
  CHECK(r.certified);
  CHECK(r.stable);
  REQUIRE(r.index.has_value());
  CHECK(*r.index == 0);
  CHECK(r.dim_ker == 1);
  CHECK(r.dim_coker == 1);
  CHECK(r.cokernel_source == "formal_adjoint");
  // oracle: k^2 + i l vanishes only at k = l = 0, next smallest modulus is 1
  for (const auto& e : r.sweep) {
    CHECK(e.kernel.first_uncounted == doctest::Approx(1.0));
    CHECK(e.kernel.last_counted == 0.0);
  }
}

TEST_CASE("identity has index 0 and trivial kernel") {
  const std::vector<int> Ks{2, 3, 4};
  IndexOptions opt;
  opt.certify = false;
  const IndexReport r = numerical_index(DiffOp::identity(s11, 1), Ks, opt);
  CHECK(r.stable);
  CHECK(r.dim_ker == 0);
  CHECK(r.index == 0);
}

TEST_CASE("uncertified operators never get an index") {
  const std::vector<int> Ks{4, 6, 8};
  const IndexReport r = numerical_index(catalog::leafwise_laplacian(), Ks);
  CHECK_FALSE(r.certified);
  CHECK_FALSE(r.index.has_value());
  CHECK_FALSE(r.cause.empty());
}

TEST_CASE("fewer than three cutoffs is not stable") {
  const std::vector<int> Ks{4, 6};
  const IndexReport r = numerical_index(catalog::heat(), Ks);
  CHECK_FALSE(r.stable);
  CHECK_FALSE(r.index.has_value());
}

TEST_CASE("square compressions are blind to the index") {
  // the calibration operator has index 2 but every square compression has
  // as many small singular values as its adjoint
  const GalerkinMatrix G = galerkin_matrix(catalog::coupled_calibration(), 4);
  const CMatrix S = square_compression(G);
  CHECK(S.rows() == S.cols());
  const auto s = linalg::singular_values(S), st = linalg::singular_values(CMatrix(S.adjoint()));
  CHECK((s - st).norm() < 1e-10 * s[0]);
  // the rectangular path sees the kernel
  CHECK(G.matrix.rows() > G.matrix.cols());
  IndexOptions opt;
  const auto c = count_kernel(linalg::singular_values(G.matrix), G.matrix.rows(), G.matrix.cols(), opt);
  CHECK(c.relative == 2);
}

TEST_CASE("threshold rules") {
  IndexOptions opt;
  Eigen::VectorXd s(5);
  s << 10.0, 5.0, 1.0, 1e-12, 1e-14;
  auto c = count_kernel(s, 5, 5, opt);
  CHECK(c.relative == 2);
  CHECK(c.gap == 2);
  CHECK(c.first_uncounted == 1.0);
  // a value between the two rules' cut-offs makes them disagree
  s << 10.0, 5.0, 1.0, 1e-6, 1e-9;
  c = count_kernel(s, 5, 5, opt);
  CHECK(c.relative == 1);
  CHECK(c.gap == 2);
  // a small but unseparated bottom value is not a kernel, however large s_max
  s << 400.0, 200.0, 1.0, 0.9, 8e-3;
  c = count_kernel(s, 5, 5, opt);
  CHECK(c.relative == 0);
  CHECK(c.gap == 0);
  // a wide matrix has a structural kernel
  Eigen::VectorXd w(2);
  w << 3.0, 2.0;
  CHECK(count_kernel(w, 2, 5, opt).relative == 3);
}

TEST_CASE("weighted Sobolev norm") {
  CHECK(weighted_sobolev_norm(TrigPoly::scalar(2, 1.0), 4, s11) == doctest::Approx(1.0));
  const TrigPoly e = TrigPoly::exponential({1, 0}, one());
  CHECK(weighted_sobolev_norm_squared(e, 2, s11) == doctest::Approx(3.0));
  CHECK(weighted_sobolev_norm(e, 2, s11) == doctest::Approx(std::sqrt(3.0)));
  std::mt19937_64 rng(6);
  const TrigPoly u = folidx::testing::random_poly(rng, 2, 1, 1, 3);
  CHECK(weighted_sobolev_norm(u, 0, s11) == doctest::Approx(u.l2_norm()));
  // oracle: sum over alpha of ||d^alpha u||^2 computed through apply
  double direct = 0.0;
  for (const auto& a : multi_indices_up_to(4, s11)) direct += std::pow(apply(DiffOp::derivative(s11, a), u).l2_norm(), 2);
  CHECK(weighted_sobolev_norm_squared(u, 4, s11) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(weighted_sobolev_norm(u, -1, s11), InputError);
}

TEST_CASE("a-priori probes") {
  const std::vector<int> Ks{2, 4, 6};
  const DiffOp A = DiffOp::derivative(s11, MultiIndex({0, 1}));
  const ProbeReport good = apriori_probe(catalog::heat(), A, 4, Ks, 3);
  // per-mode ratio |l| / (|k^2 + il| + 1) = K / (K + 1) at its worst
  for (const auto& e : good.sweep) {
    CHECK(e.c_hat <= 1.0);
    CHECK(e.c_modes == doctest::Approx(e.K / (e.K + 1.0)));
  }
  const ProbeReport bad = apriori_probe(catalog::leafwise_laplacian(), A, 4, Ks, 3);
  for (const auto& e : bad.sweep) CHECK(e.c_hat == doctest::Approx(static_cast<double>(e.K)));
  CHECK(bad.growth == doctest::Approx(3.0));
  const ProbeReport id = apriori_probe(catalog::heat(), DiffOp::identity(s11, 1), 4, Ks, 3);
  for (const auto& e : id.sweep) CHECK(e.c_hat <= 1.0);
  CHECK_THROWS_AS(apriori_probe(DiffOp::derivative(s11, MultiIndex({1, 0})), catalog::heat(), 4, Ks, 3),
                  InputError);
  // the same seed reproduces the same numbers
  CHECK(apriori_probe(catalog::heat(), A, 4, Ks, 3).sweep.back().c_random == good.sweep.back().c_random);
}
