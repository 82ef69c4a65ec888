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

#include "folidx/catalog.hpp"

#include <cmath>
#include <random>

#include "folidx/errors.hpp"

namespace folidx::catalog {
namespace {

const FoliationSplit kSurface{1, 1};

CMatrix pauli(int which) {
  CMatrix s(2, 2);
  const cplx i(0.0, 1.0);
  if (which == 1) s << 0, 1, 1, 0;
  else if (which == 2) s << 0, -i, i, 0;
  else s << 1, 0, 0, -1;
  return s;
}

// Random trig poly with entries ~ amplitude * N(0,1)/sqrt(#modes) per mode.
TrigPoly random_poly(std::mt19937_64& rng, int rank, int bandwidth, double amplitude) {
  std::normal_distribution<double> g(0.0, 1.0);
  TrigPoly out(2, rank, rank);
  const int side = 2 * bandwidth + 1;
  const double scale = amplitude / side;
  for (int a = -bandwidth; a <= bandwidth; ++a)
    for (int b = -bandwidth; b <= bandwidth; ++b) {
      CMatrix c(rank, rank);
      for (int r = 0; r < rank; ++r)
        for (int s = 0; s < rank; ++s) c(r, s) = scale * cplx(g(rng), g(rng));
      out.add_term({a, b}, c);
    }
  return out;
}

}  // namespace

TrigPoly sin_x(int n, int axis, cplx amplitude) {
  Frequency k(n, 0);
  k[axis] = 1;
  TrigPoly out = TrigPoly::exponential(k, CMatrix::Constant(1, 1, amplitude / cplx(0.0, 2.0)));
  k[axis] = -1;
  return out + TrigPoly::exponential(k, CMatrix::Constant(1, 1, -amplitude / cplx(0.0, 2.0)));
}

TrigPoly cos_x(int n, int axis, cplx amplitude) {
  Frequency k(n, 0);
  k[axis] = 1;
  TrigPoly out = TrigPoly::exponential(k, CMatrix::Constant(1, 1, amplitude / 2.0));
  k[axis] = -1;
  return out + TrigPoly::exponential(k, CMatrix::Constant(1, 1, amplitude / 2.0));
}

DiffOp heat() {
  DiffOp P(kSurface, 1, 1);
  P.add_monomial(MultiIndex({2, 0}), TrigPoly::scalar(2, -1.0));
  P.add_monomial(MultiIndex({0, 1}), TrigPoly::scalar(2, 1.0));
  return P;
}

DiffOp leafwise_laplacian() {
  return DiffOp::monomial(kSurface, MultiIndex({2, 0}), TrigPoly::scalar(2, -1.0));
}

DiffOp winding_operator(int k, double eps) {
  const FoliationSplit split{2, 0};
  const CMatrix one = CMatrix::Constant(1, 1, 1.0);
  DiffOp P(split, 1, 1);
  P.add_monomial(MultiIndex({1, 0}), TrigPoly::exponential({k, 0}, one));
  P.add_monomial(MultiIndex({0, 1}), TrigPoly::exponential({k, 0}, one * cplx(0.0, 1.0)));
  if (eps != 0.0) P.add_monomial(MultiIndex({0, 0}), TrigPoly::scalar(2, eps));
  return P;
}

DiffOp coupled_calibration() {
  const FoliationSplit split{2, 0};
  const cplx i(0.0, 1.0);
  // W = i (w1 sx + w2 sy + w3 sz)
  TrigPoly W = sin_x(2, 0, i).broadcast(2) * TrigPoly::constant(2, pauli(1));
  W = W + sin_x(2, 1, i).broadcast(2) * TrigPoly::constant(2, pauli(2));
  const TrigPoly w3 = TrigPoly::scalar(2, i) - cos_x(2, 0, i) - cos_x(2, 1, i);
  W = W + w3.broadcast(2) * TrigPoly::constant(2, pauli(3));
  DiffOp P(split, 2, 2);
  P.add_monomial(MultiIndex({1, 0}), TrigPoly::constant(2, CMatrix::Identity(2, 2)));
  P.add_monomial(MultiIndex({0, 1}), W);
  return P;
}

DiffOp mixed_laplacian(FoliationSplit split) {
  if (split.n() != 2) throw InputError("mixed_laplacian: n must be 2");
  DiffOp P(split, 1, 1);
  P.add_monomial(MultiIndex({2, 0}), TrigPoly::scalar(2, -1.0));
  P.add_monomial(MultiIndex({0, 2}), TrigPoly::scalar(2, -1.0));
  P.add_monomial(MultiIndex({0, 1}), TrigPoly::scalar(2, 1.0));
  return P;
}

DiffOp random_weighted_elliptic(std::uint64_t seed, const RandomSpec& spec) {
  if (spec.rank < 1) throw InputError("random_weighted_elliptic: rank must be >= 1");
  std::mt19937_64 rng(seed);
  const CMatrix I = CMatrix::Identity(spec.rank, spec.rank);
  const TrigPoly a = TrigPoly::constant(2, -I) + random_poly(rng, spec.rank, spec.bandwidth, spec.top_amplitude);
  const TrigPoly b = TrigPoly::constant(2, I) + random_poly(rng, spec.rank, spec.bandwidth, spec.top_amplitude);
  const TrigPoly c = random_poly(rng, spec.rank, spec.bandwidth, spec.lower_amplitude);
  DiffOp P(kSurface, spec.rank, spec.rank);
  P.add_monomial(MultiIndex({2, 0}), a);
  P.add_monomial(MultiIndex({0, 1}), b);
  P.add_monomial(MultiIndex({1, 0}), c);
  return P;
}

DiffOp random_lower_order(std::uint64_t seed, int rank, double amplitude, int bandwidth) {
  std::mt19937_64 rng(seed);
  DiffOp Q(kSurface, rank, rank);
  Q.add_monomial(MultiIndex({1, 0}), random_poly(rng, rank, bandwidth, amplitude));
  Q.add_monomial(MultiIndex({0, 0}), random_poly(rng, rank, bandwidth, amplitude));
  return Q;
}

std::vector<ChartMap> foliated_maps() {
  using V = std::vector<double>;
  using S = std::span<const double>;
  const FoliationSplit s11{1, 1}, s21{2, 1};
  std::vector<ChartMap> maps;
  maps.push_back(foliated_diffeo(
      s11, [](S x, S y) { return V{x[0] + x[0] * y[0]}; }, [](S y) { return V{y[0] + y[0] * y[0]}; },
      "(x + xy, y + y^2)"));
  maps.push_back(foliated_diffeo(
      s11, [](S x, S y) { return V{2.0 * x[0] + x[0] * x[0] + y[0]}; },
      [](S y) { return V{3.0 * y[0] + y[0] * y[0] * y[0]}; }, "(2x + x^2 + y, 3y + y^3)"));
  maps.push_back(foliated_diffeo(
      s11, [](S x, S y) { return V{std::sin(x[0]) * std::cos(y[0]) + x[0] * x[0] * x[0]}; },
      [](S y) { return V{y[0] * std::exp(y[0])}; }, "(sin x cos y + x^3, y e^y)"));
  maps.push_back(foliated_diffeo(
      s11, [](S x, S y) { return V{std::expm1(x[0]) + y[0] * y[0]}; },
      [](S y) { return V{std::log1p(y[0])}; }, "(e^x - 1 + y^2, log(1 + y))"));
  maps.push_back(foliated_diffeo(
      s21, [](S x, S y) { return V{x[0] + x[1] * y[0], x[1] + x[0] * x[0]}; },
      [](S y) { return V{2.0 * y[0] + y[0] * y[0]}; }, "(x1 + x2 y, x2 + x1^2, 2y + y^2)"));
  return maps;
}

std::vector<ChartMap> non_foliated_controls() {
  using V = std::vector<double>;
  using S = std::span<const double>;
  const FoliationSplit s11{1, 1};
  std::vector<ChartMap> maps;
  maps.push_back({s11, [](S x, S) { return V{x[0]}; }, [](S x, S y) { return V{y[0] + x[0] * x[0]}; },
                  "(x, y + x^2)"});
  maps.push_back({s11, [](S x, S) { return V{x[0]}; }, [](S x, S y) { return V{y[0] + x[0]}; },
                  "(x, y + x)"});
  return maps;
}

std::vector<GradedPoint> law_points(FoliationSplit split) {
  const double base[4][3] = {{0.7, -0.4, 0.3}, {-0.5, 0.9, -0.6}, {1.0, 0.2, 0.8}, {-0.3, -0.8, 0.5}};
  std::vector<GradedPoint> pts;
  for (const auto& b : base) {
    GradedPoint g;
    for (int i = 0; i < split.p; ++i) g.x.push_back(b[i % 3]);
    for (int j = 0; j < split.q; ++j) g.y.push_back(b[(split.p + j) % 3]);
    pts.push_back(g);
  }
  return pts;
}

}  // namespace folidx::catalog
