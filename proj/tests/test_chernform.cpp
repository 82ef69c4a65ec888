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
#include <numbers>
#include <sstream>

#include "folidx/catalog.hpp"
#include "folidx/chernform.hpp"
#include "folidx/errors.hpp"

using namespace folidx;

namespace {

// Loose plan for small grids: only the integral values are under test here.
ChernGridPlan loose(int nodes, std::vector<double> radii) {
  ChernGridPlan p;
  p.base_nodes = nodes;
  p.radii = std::move(radii);
  p.smoothness_limit = 1e9;
  p.tail_limit = 1e9;
  return p;
}

FormGrid x1_field(int N, const std::function<CMatrix(double)>& f) {
  FormGrid g;
  const double h = 2 * std::numbers::pi / N;
  g.axes = {FormAxis{0, h, N, true}, FormAxis{0, h, 3, true}, FormAxis{-1, 1, 3, false},
            FormAxis{-1, 1, 3, false}};
  g.size = static_cast<int>(f(0.0).rows());
  g.values.resize(g.node_count());
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) g.values[g.index(i, a, b, c)] = f(i * h);
  return g;
}

}  // namespace

TEST_CASE("constant field has zero derivatives and density") {
  const FormGrid g = x1_field(8, [](double) { return graph_projection(CMatrix::Constant(1, 1, cplx(0.3, 0.4))); });
  const FormDerivatives d = exterior_derivative(g);
  for (const auto& axis : d.d)
    for (const auto& m : axis) CHECK(m.norm() < 1e-14);
  for (double v : chern_density(g, d)) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("derivative of graph_projection(e^{ix}) is second order") {
  // e = 1/2 [[1, e^{-ix}], [e^{ix}, 1]], de/dx = 1/2 [[0, -i e^{-ix}], [i e^{ix}, 0]]
  auto e = [](double x) { return graph_projection(CMatrix::Constant(1, 1, std::exp(cplx(0, x)))); };
  auto de = [](double x) {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 1) = 0.5 * cplx(0, -1) * std::exp(cplx(0, -x));
    d(1, 0) = 0.5 * cplx(0, 1) * std::exp(cplx(0, x));
    return d;
  };
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const int N = 16 << r;
    const FormGrid g = x1_field(N, e);
    const FormDerivatives d = exterior_derivative(g);
    err[r] = 0.0;
    for (int i = 0; i < N; ++i) err[r] = std::max(err[r], (d.d[0][g.index(i, 1, 1, 1)] - de(g.axes[0].coordinate(i))).norm());
  }
  CHECK(err[0] < 0.02);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("coarse grids are rejected by the smoothness check") {
  const FormGrid g = x1_field(8, [](double x) { return graph_projection(CMatrix::Constant(1, 1, 5.0 * std::exp(cplx(0, 3 * x)))); });
  CHECK_THROWS_AS(exterior_derivative(g, 0.05), RefineGridError);
}

TEST_CASE("streamed and in-memory integrals agree") {
  const WeightedSymbol s = principal_symbol(catalog::coupled_calibration());
  const ChernResult r = topological_index(s, loose(8, {2.0, 3.0}));
  FormGridSpec spec;
  spec.base_nodes = 8;
  spec.fiber_nodes = 8;
  spec.radius = 2.0;
  const FormGrid g = sample_form_grid(s, spec);
  const double direct = integrate_density(g, chern_density(g, exterior_derivative(g, 1e9)));
  CHECK(direct == doctest::Approx(r.table.front().integral).epsilon(1e-10));
  CHECK(direct != 0.0);
}

TEST_CASE("scalar symbols have identically zero density") {
  FormGridSpec spec;
  spec.base_nodes = 6;
  spec.fiber_nodes = 7;
  spec.radius = 3.0;
  for (const DiffOp& P : {catalog::heat(), catalog::winding_operator(1, 0.1)}) {
    const FormGrid g = sample_form_grid(principal_symbol(P), spec);
    for (double v : chern_density(g, exterior_derivative(g, 1e9))) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("heat symbol integrates to zero") {
  const ChernResult r = topological_index(principal_symbol(catalog::heat()), loose(12, {3.0, 4.0}));
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(r.nearest_integer == 0);
  CHECK_FALSE(r.flagged);
  CHECK(r.convention.sign == -1.0);
}

TEST_CASE("calibration symbol integrates to its analytic index") {
  const ChernResult r = topological_index(principal_symbol(catalog::coupled_calibration()), loose(16, {4.0, 6.0}));
  CHECK(r.nearest_integer == 2);
  CHECK(r.distance_to_integer < 0.1);
  CHECK(r.decay_exponent == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("parity: generated (1,1) matrix symbols integrate to zero") {
  const DiffOp P = catalog::random_weighted_elliptic(21, {.rank = 2});
  const ChernResult r = topological_index(principal_symbol(P), loose(8, {2.0, 3.0}));
  CHECK(std::abs(r.value) < 1e-9);
}

TEST_CASE("gauge invariance under constant unitaries") {
  const WeightedSymbol s = principal_symbol(catalog::coupled_calibration());
  CMatrix U(2, 2);
  U << std::cos(0.7), cplx(0, std::sin(0.7)), cplx(0, std::sin(0.7)), std::cos(0.7);
  const auto plan = loose(8, {2.0, 3.0});
  const ChernResult a = topological_index(s, plan), b = topological_index(conjugate(U, s), plan);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
}

TEST_CASE("shear checks") {
  const auto plan = loose(8, {2.0, 3.0});
  const WeightedSymbol heat = principal_symbol(catalog::heat());
  const ShearReport zero = splitting_shear_check(heat, Eigen::MatrixXd::Zero(1, 1), plan);
  CHECK(zero.difference == 0.0);
  CHECK(zero.agree);
  const ShearReport q0 = splitting_shear_check(principal_symbol(catalog::coupled_calibration()), Eigen::MatrixXd(0, 2), plan);
  CHECK(q0.difference == 0.0);
  CHECK_THROWS_AS(splitting_shear_check(heat, Eigen::MatrixXd::Zero(2, 2), plan), InputError);
}

TEST_CASE("degenerate-foliation agreement for the mixed laplacian") {
  // -d_x^2 - d_y^2 + d_y is weighted elliptic of order 2 for (2,0); the
  // (1,1) calculus sees the heat principal part. Both indices are 0.
  const auto plan = loose(8, {2.0, 3.0});
  const ChernResult foliated = topological_index(principal_symbol(catalog::heat()), plan);
  const ChernResult classical = topological_index(principal_symbol(catalog::mixed_laplacian({2, 0})), plan);
  CHECK(foliated.nearest_integer == classical.nearest_integer);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(topological_index(principal_symbol(catalog::leafwise_laplacian())), UncertifiedError);
  CHECK_THROWS_AS(topological_index(principal_symbol(DiffOp::identity({1, 1}, 1))), InputError);
  CHECK_THROWS_AS(topological_index(principal_symbol(DiffOp::identity({3, 0}, 1))), InputError);
}

TEST_CASE("density slice CSV") {
  FormGridSpec spec;
  spec.base_nodes = 4;
  spec.fiber_nodes = 5;
  spec.radius = 1.0;
  const FormGrid g = sample_form_grid(principal_symbol(catalog::coupled_calibration()), spec);
  const auto dens = chern_density(g, exterior_derivative(g, 1e9));
  std::ostringstream os;
  write_density_slice_csv(os, g, dens, 2, 3, {0, 0, 0, 0});
  const std::string s = os.str();
  CHECK(s.rfind("f1,f2,density\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 26);
}
