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
#include "folidx/symbolics.hpp"
#include "support.hpp"

using namespace folidx;

namespace {

const FoliationSplit s11{1, 1};

// Independent projection onto the graph {(v, Tv)}: orthonormalize [I; T] by QR.
CMatrix graph_projection_qr(const CMatrix& T) {
  const int m = static_cast<int>(T.cols());
  CMatrix G(T.rows() + m, m);
  G.topRows(m) = CMatrix::Identity(m, m);
  G.bottomRows(T.rows()) = T;
  Eigen::HouseholderQR<CMatrix> qr(G);
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(G.rows(), m);
  return Q * Q.adjoint();
}

}  // namespace

TEST_CASE("fiber dilation and weighted radius") {
  const FiberPoint f{{0.6}, {-0.8}};
  const double rho = f.weighted_radius();
  CHECK(rho == doctest::Approx(std::pow(std::pow(0.6, 4) + 0.64, 0.25)));
  CHECK(f.dilated(3.0).weighted_radius() == doctest::Approx(3.0 * rho));
  CHECK(f.normalized().weighted_radius() == doctest::Approx(1.0));
}

TEST_CASE("principal symbol keeps the top weighted part") {
  DiffOp P = catalog::heat();
  P.add_monomial(MultiIndex({1, 0}), catalog::sin_x(2, 0));
  const WeightedSymbol s = principal_symbol(P);
  CHECK(s.degree() == 2);
  CHECK(s.monomials().size() == 2);
  const double x[2] = {0.1, 0.2};
  // sigma = -(i xi)^2 + i eta = xi^2 + i eta
  CHECK(std::abs(s.evaluate(x, FiberPoint{{1.5}, {0.7}})(0, 0) - cplx(2.25, 0.7)) < 1e-14);
}

TEST_CASE("homogeneity holds for generated symbols") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const DiffOp P = catalog::random_weighted_elliptic(seed, {.rank = 2});
    const auto rep = check_homogeneity(principal_symbol(P), 64, 0.25, 8.0, seed);
    CHECK(rep.passed);
    CHECK(rep.max_relative_deviation < 1e-10);
  }
}

TEST_CASE("invertibility certificates") {
  SUBCASE("heat symbol has s_min = 1 on the weighted sphere") {
    const auto c = check_invertibility(principal_symbol(catalog::heat()));
    CHECK(c.passed);
    CHECK(c.degree == 2);
    CHECK(c.s_min == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("leafwise laplacian fails at (xi, eta) = (0, +-1)") {
    const auto c = check_invertibility(principal_symbol(catalog::leafwise_laplacian()));
    CHECK_FALSE(c.passed);
    CHECK(c.s_min < 1e-12);
    CHECK(std::abs(c.witness_fiber.xi[0]) < 1e-12);
    CHECK(std::abs(std::abs(c.witness_fiber.eta[0]) - 1.0) < 1e-12);
  }
  SUBCASE("winding symbol has |sigma| = |xi|") {
    const auto c = check_invertibility(principal_symbol(catalog::winding_operator(1, 0.0)));
    CHECK(c.passed);
    CHECK(c.s_min == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("odd degree with q >= 1 cannot be certified") {
    // d_x alone is weighted order 1, symbol vanishes at xi = 0
    const auto c = check_invertibility(principal_symbol(DiffOp::derivative(s11, MultiIndex({1, 0}))));
    CHECK_FALSE(c.passed);
  }
  SUBCASE("non-square symbol is an input error") {
    DiffOp P(s11, 1, 2);
    P.add_monomial(MultiIndex({0, 1}), TrigPoly::constant(2, CMatrix::Ones(2, 1)));
    CHECK_THROWS_AS(check_invertibility(principal_symbol(P)), InputError);
  }
}

TEST_CASE("graph projection algebra") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 3;
    CMatrix T(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) T(i, j) = cplx(g(rng), g(rng)) * (1.0 + trial % 5);
    const CMatrix e = graph_projection(T);
    CHECK((e * e - e).norm() < 1e-10);
    CHECK((e - e.adjoint()).norm() < 1e-12);
    CHECK(std::abs(e.trace() - cplx(m)) < 1e-10);
    CHECK((e - graph_projection_alternate(T)).norm() < 1e-10);
    CHECK((e - graph_projection_qr(T)).norm() < 1e-10);
  }
  CHECK((graph_projection(CMatrix::Zero(2, 2)) - (CMatrix::Identity(4, 4) - reference_projection(2))).norm() == 0.0);
}

TEST_CASE("graph projection of a rectangular operator") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix T(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) T(i, j) = cplx(g(rng), g(rng));
  const CMatrix e = graph_projection(T);
  CHECK((e - graph_projection_qr(T)).norm() < 1e-12);
  CHECK(std::abs(e.trace() - cplx(2.0)) < 1e-12);
}

TEST_CASE("projection field decays like rho^-d") {
  const WeightedSymbol s = principal_symbol(catalog::heat());
  const std::vector<double> radii{10, 20, 40, 80};
  const auto d = measure_decay(s, radii, 32, 5);
  CHECK(d.passed);
  CHECK(d.exponent == doctest::Approx(2.0).epsilon(0.05));

  ProjFieldGrid grid;
  grid.base_nodes = 4;
  grid.fiber_points = weighted_sphere_grid(s11, 8);
  const auto cert = check_invertibility(s);
  const ProjField f = symbol_projection_field(s, grid, cert);
  CHECK(f.values.size() == 16 * grid.fiber_points.size());
  CHECK(f.max_idempotence_defect < 1e-10);
  CHECK(f.max_trace_defect < 1e-8);

  const auto bad = check_invertibility(principal_symbol(catalog::leafwise_laplacian()));
  CHECK_THROWS_AS(symbol_projection_field(principal_symbol(catalog::leafwise_laplacian()), grid, bad),
                  UncertifiedError);
}

TEST_CASE("unitary conjugation preserves singular values") {
  const WeightedSymbol s = principal_symbol(catalog::coupled_calibration());
  CMatrix U(2, 2);
  const double c = std::cos(0.4), sn = std::sin(0.4);
  U << c, cplx(0, sn), cplx(0, sn), c;
  const WeightedSymbol t = conjugate(U, s);
  const double x[2] = {1.0, 2.0};
  const FiberPoint f{{0.3, -0.9}, {}};
  CHECK((t.evaluate(x, f) - U * s.evaluate(x, f) * U.adjoint()).norm() < 1e-13);
}
