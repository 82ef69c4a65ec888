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

#include "folidx/chernform.hpp"

#include <cmath>
#include <ostream>

#include "folidx/errors.hpp"

namespace folidx {
namespace {

void require_surface(const WeightedSymbol& s) {
  if (s.split().n() != 2) throw InputError("chernform: only n = 2 is supported");
  if (s.rank_in() != s.rank_out()) throw InputError("chernform: non-square symbol");
}

Eigen::MatrixXd checked_shear(const FoliationSplit& split, const Eigen::MatrixXd& S) {
  if (S.size() == 0) return Eigen::MatrixXd::Zero(split.q, split.p);
  if (S.rows() != split.q || S.cols() != split.p)
    throw InputError("shear matrix must be q x p");
  return S;
}

// Symbol frozen at one base point, evaluated on fixed-size matrices.
template <int M>
struct FrozenSymbol {
  using Mat = Eigen::Matrix<cplx, M, M>;
  struct Term {
    int a0, a1;
    Mat c;
  };
  std::vector<Term> terms;
  int p = 0;
  Eigen::MatrixXd S;

  FrozenSymbol(const WeightedSymbol& s, double x0, double x1, const Eigen::MatrixXd& shear)
      : p(s.split().p), S(shear) {
    const double x[2] = {x0, x1};
    for (const auto& [alpha, a] : s.monomials())
      terms.push_back({alpha[0], alpha[1], Mat(a.evaluate(std::span<const double>(x, 2)))});
  }

  Mat at(double f0, double f1) const {
    // sheared fiber: eta -> eta + S xi
    if (p == 1 && S.size() == 1) f1 += S(0, 0) * f0;
    const cplx z0(0.0, f0), z1(0.0, f1);
    Mat out = Mat::Zero(terms.front().c.rows(), terms.front().c.cols());
    for (const auto& t : terms) {
      cplx w(1.0, 0.0);
      for (int r = 0; r < t.a0; ++r) w *= z0;
      for (int r = 0; r < t.a1; ++r) w *= z1;
      out += w * t.c;
    }
    return out;
  }
};

template <int M>
using EMat = Eigen::Matrix<cplx, M == Eigen::Dynamic ? Eigen::Dynamic : 2 * M,
                           M == Eigen::Dynamic ? Eigen::Dynamic : 2 * M>;

template <int M>
EMat<M> projection(const Eigen::Matrix<cplx, M, M>& T) {
  const int m = static_cast<int>(T.rows());
  using Mat = Eigen::Matrix<cplx, M, M>;
  const Mat A = (Mat::Identity(m, m) + T.adjoint() * T).inverse();
  const Mat TA = T * A;
  EMat<M> e(2 * m, 2 * m);
  e.topLeftCorner(m, m) = A;
  e.topRightCorner(m, m) = TA.adjoint();
  e.bottomLeftCorner(m, m) = TA;
  e.bottomRightCorner(m, m) = TA * T.adjoint();
  return e;
}

// tr(F^F) top coefficient for the axis order (0,1,2,3).
template <class Mat>
double trace_ff(const Mat& e, const Mat& d0, const Mat& d1, const Mat& d2, const Mat& d3) {
  const Mat* d[4] = {&d0, &d1, &d2, &d3};
  auto g = [&](int a, int b) -> Mat { return e * (*d[a] * *d[b] - *d[b] * *d[a]); };
  auto tr = [](const Mat& A, const Mat& B) { return (A.array() * B.transpose().array()).sum(); };
  const cplx t = tr(g(0, 1), g(2, 3)) - tr(g(0, 2), g(1, 3)) + tr(g(0, 3), g(1, 2));
  return 2.0 * t.real();
}

template <class Mat>
double smoothness(const Mat& d, double h, double limit) {
  const double f = d.norm() * h;
  if (f < limit) return f;
  // d is Hermitian; fall back to the spectral norm
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(d), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff() * h;
}

template <class Get>
auto fiber_diff(const Get& get, int k, int n, double h) {
  if (k == 0) return ((-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h)).eval();
  if (k == n - 1) return ((3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h)).eval();
  return ((get(k + 1) - get(k - 1)) / (2.0 * h)).eval();
}

double trapezoid_weight(int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

struct LevelResult {
  double integral = 0.0;
  double smoothness = 0.0;
};

// Streams x1-planes through a three-plane window so memory stays O(N^3).
template <int M>
LevelResult integrate_level(const WeightedSymbol& s, int Nb, int Nf, double R,
                            const Eigen::MatrixXd& shear, double factor, double limit) {
  using E = EMat<M>;
  const double hb = 2.0 * std::numbers::pi / Nb;
  const double hf = 2.0 * R / (Nf - 1);
  const std::size_t plane_size = static_cast<std::size_t>(Nb) * Nf * Nf;
  auto fidx = [&](int j, int k, int l) {
    return (static_cast<std::size_t>(j) * Nf + k) * Nf + l;
  };
  auto plane = [&](int i) {
    std::vector<E> out(plane_size);
    const int ii = ((i % Nb) + Nb) % Nb;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < Nb; ++j) {
      const FrozenSymbol<M> fs(s, ii * hb, j * hb, shear);
      for (int k = 0; k < Nf; ++k)
        for (int l = 0; l < Nf; ++l) out[fidx(j, k, l)] = projection<M>(fs.at(-R + k * hf, -R + l * hf));
    }
    return out;
  };
  std::vector<E> prev = plane(-1), cur = plane(0), next = plane(1);
  LevelResult res;
  for (int i = 0; i < Nb; ++i) {
    double slab = 0.0, smooth = 0.0;
#pragma omp parallel for reduction(+ : slab) reduction(max : smooth) schedule(static)
    for (int j = 0; j < Nb; ++j) {
      const int jp = (j + 1) % Nb, jm = (j + Nb - 1) % Nb;
      for (int k = 0; k < Nf; ++k)
        for (int l = 0; l < Nf; ++l) {
          const std::size_t at = fidx(j, k, l);
          const E& e = cur[at];
          const E d0 = (next[at] - prev[at]) / (2.0 * hb);
          const E d1 = (cur[fidx(jp, k, l)] - cur[fidx(jm, k, l)]) / (2.0 * hb);
          const E d2 = fiber_diff([&](int kk) -> const E& { return cur[fidx(j, kk, l)]; }, k, Nf, hf);
          const E d3 = fiber_diff([&](int ll) -> const E& { return cur[fidx(j, k, ll)]; }, l, Nf, hf);
          smooth = std::max({smooth, smoothness(d0, hb, limit), smoothness(d1, hb, limit),
                             smoothness(d2, hf, limit), smoothness(d3, hf, limit)});
          slab += trapezoid_weight(k, Nf) * trapezoid_weight(l, Nf) * trace_ff(e, d0, d1, d2, d3);
        }
    }
    res.integral += slab;
    res.smoothness = std::max(res.smoothness, smooth);
    if (i + 1 < Nb) {
      prev = std::move(cur);
      cur = std::move(next);
      next = plane(i + 2);
    }
  }
  res.integral *= factor * hb * hb * hf * hf;
  return res;
}

LevelResult run_level(const WeightedSymbol& s, int Nb, int Nf, double R,
                      const Eigen::MatrixXd& shear, double factor, double limit) {
  switch (s.rank_in()) {
    case 1: return integrate_level<1>(s, Nb, Nf, R, shear, factor, limit);
    case 2: return integrate_level<2>(s, Nb, Nf, R, shear, factor, limit);
    case 3: return integrate_level<3>(s, Nb, Nf, R, shear, factor, limit);
    default: return integrate_level<Eigen::Dynamic>(s, Nb, Nf, R, shear, factor, limit);
  }
}

}  // namespace

FormGrid sample_form_grid(const WeightedSymbol& s, const FormGridSpec& spec) {
  require_surface(s);
  if (spec.base_nodes < 3 || spec.fiber_nodes < 3 || !(spec.radius > 0.0))
    throw InputError("sample_form_grid: need >= 3 nodes per axis and R > 0");
  const Eigen::MatrixXd S = checked_shear(s.split(), spec.shear);
  FormGrid g;
  const double hb = 2.0 * std::numbers::pi / spec.base_nodes;
  const double hf = 2.0 * spec.radius / (spec.fiber_nodes - 1);
  g.axes = {FormAxis{0.0, hb, spec.base_nodes, true}, FormAxis{0.0, hb, spec.base_nodes, true},
            FormAxis{-spec.radius, hf, spec.fiber_nodes, false},
            FormAxis{-spec.radius, hf, spec.fiber_nodes, false}};
  g.size = 2 * s.rank_in();
  g.values.resize(g.node_count());
  for (int i = 0; i < spec.base_nodes; ++i)
    for (int j = 0; j < spec.base_nodes; ++j) {
      const FrozenSymbol<Eigen::Dynamic> fs(s, i * hb, j * hb, S);
      for (int k = 0; k < spec.fiber_nodes; ++k)
        for (int l = 0; l < spec.fiber_nodes; ++l)
          g.values[g.index(i, j, k, l)] =
              projection<Eigen::Dynamic>(fs.at(g.axes[2].coordinate(k), g.axes[3].coordinate(l)));
    }
  return g;
}

FormDerivatives exterior_derivative(const FormGrid& f, double limit) {
  FormDerivatives out;
  const std::size_t N = f.node_count();
  if (f.values.size() != N) throw InputError("exterior_derivative: grid/value size mismatch");
  for (auto& d : out.d) d.resize(N);
  for (int a = 0; a < 4; ++a) {
    const FormAxis& ax = f.axes[a];
    if (ax.nodes < 3) throw InputError("exterior_derivative: need >= 3 nodes per axis");
    for (int i0 = 0; i0 < f.axes[0].nodes; ++i0)
      for (int i1 = 0; i1 < f.axes[1].nodes; ++i1)
        for (int i2 = 0; i2 < f.axes[2].nodes; ++i2)
          for (int i3 = 0; i3 < f.axes[3].nodes; ++i3) {
            std::array<int, 4> id{i0, i1, i2, i3};
            auto get = [&](int v) -> const CMatrix& {
              std::array<int, 4> j = id;
              j[a] = ax.periodic ? ((v % ax.nodes) + ax.nodes) % ax.nodes : v;
              return f.values[f.index(j[0], j[1], j[2], j[3])];
            };
            CMatrix d = ax.periodic ? CMatrix((get(id[a] + 1) - get(id[a] - 1)) / (2.0 * ax.h))
                                    : fiber_diff(get, id[a], ax.nodes, ax.h);
            out.max_smoothness = std::max(out.max_smoothness, smoothness(d, ax.h, limit));
            out.d[a][f.index(i0, i1, i2, i3)] = std::move(d);
          }
  }
  if (out.max_smoothness >= limit)
    throw RefineGridError("exterior_derivative: ||de|| h = " + std::to_string(out.max_smoothness) +
                          " exceeds " + std::to_string(limit) + "; refine the grid");
  return out;
}

std::vector<double> chern_density(const FormGrid& f, const FormDerivatives& de,
                                  const ChernConvention& conv) {
  std::vector<double> out(f.node_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = conv.factor() * trace_ff(f.values[i], de.d[0][i], de.d[1][i], de.d[2][i], de.d[3][i]);
  return out;
}

double integrate_density(const FormGrid& f, const std::vector<double>& density) {
  double total = 0.0;
  for (int i0 = 0; i0 < f.axes[0].nodes; ++i0)
    for (int i1 = 0; i1 < f.axes[1].nodes; ++i1)
      for (int i2 = 0; i2 < f.axes[2].nodes; ++i2)
        for (int i3 = 0; i3 < f.axes[3].nodes; ++i3) {
          const int id[4] = {i0, i1, i2, i3};
          double w = 1.0;
          for (int a = 0; a < 4; ++a)
            w *= f.axes[a].h * (f.axes[a].periodic ? 1.0 : trapezoid_weight(id[a], f.axes[a].nodes));
          total += w * density[f.index(i0, i1, i2, i3)];
        }
  return total;
}

void write_density_slice_csv(std::ostream& os, const FormGrid& f,
                             const std::vector<double>& density, int axis_a, int axis_b,
                             const std::array<int, 4>& fixed) {
  if (axis_a == axis_b || axis_a < 0 || axis_a > 3 || axis_b < 0 || axis_b > 3)
    throw InputError("write_density_slice_csv: need two distinct axes in 0..3");
  static const char* names[4] = {"x1", "x2", "f1", "f2"};
  os << names[axis_a] << ',' << names[axis_b] << ",density\n";
  os.precision(17);
  std::array<int, 4> id = fixed;
  for (int u = 0; u < f.axes[axis_a].nodes; ++u)
    for (int v = 0; v < f.axes[axis_b].nodes; ++v) {
      id[axis_a] = u;
      id[axis_b] = v;
      os << f.axes[axis_a].coordinate(u) << ',' << f.axes[axis_b].coordinate(v) << ','
         << density[f.index(id[0], id[1], id[2], id[3])] << '\n';
    }
}

ChernResult topological_index(const WeightedSymbol& s, const ChernGridPlan& plan,
                              const Eigen::MatrixXd& shear) {
  require_surface(s);
  if (plan.base_nodes < 3 || plan.radii.size() < 2)
    throw InputError("topological_index: need >= 3 base nodes and >= 2 radii");
  if (s.degree() < 1) throw InputError("topological_index: weighted degree must be >= 1");
  const Eigen::MatrixXd S = checked_shear(s.split(), shear);
  ChernResult res;
  res.convention = default_convention();
  res.certificate = check_invertibility(s, plan.invertibility);
  if (!res.certificate.passed)
    throw UncertifiedError("topological_index: weighted principal symbol not certified invertible");

  const std::vector<double> decay_radii{10.0, 20.0, 40.0, 80.0};
  res.decay_exponent = measure_decay(s, decay_radii, 64, 11).exponent;

  const int N = plan.base_nodes;
  for (double R : plan.radii) {
    const LevelResult coarse = run_level(s, N, N, R, S, res.convention.factor(), plan.smoothness_limit);
    const LevelResult fine =
        run_level(s, 2 * N, 2 * N - 1, R, S, res.convention.factor(), plan.smoothness_limit);
    res.table.push_back({R, N, N, 2.0 * std::numbers::pi / N, 2.0 * R / (N - 1), coarse.integral,
                         coarse.smoothness});
    res.table.push_back({R, 2 * N, 2 * N - 1, std::numbers::pi / N, R / (N - 1), fine.integral,
                         fine.smoothness});
    if (fine.smoothness >= plan.smoothness_limit)
      throw RefineGridError("topological_index: ||de|| h = " + std::to_string(fine.smoothness) +
                            " at R = " + std::to_string(R) + "; refine the grid");
    res.extrapolated.emplace_back(R, (4.0 * fine.integral - coarse.integral) / 3.0);
  }
  const auto& last = res.extrapolated.back();
  const auto& before = res.extrapolated[res.extrapolated.size() - 2];
  res.value = last.second;
  res.quadrature_error = std::abs(res.table.back().integral - res.table[res.table.size() - 2].integral) / 3.0;
  const double kappa = res.decay_exponent;
  const double change = std::abs(last.second - before.second);
  if (change == 0.0)
    res.tail_bound = 0.0;
  else if (kappa > 0.0)
    res.tail_bound = change / (std::pow(last.first / before.first, kappa) - 1.0);
  else
    res.tail_bound = std::numeric_limits<double>::infinity();
  if (res.tail_bound > plan.tail_limit)
    throw RefineGridError("topological_index: tail bound " + std::to_string(res.tail_bound) +
                          " exceeds " + std::to_string(plan.tail_limit) + "; increase R");
  res.nearest_integer = std::lround(res.value);
  res.distance_to_integer = std::abs(res.value - static_cast<double>(res.nearest_integer));
  res.flagged = res.distance_to_integer >= plan.integer_tolerance;
  return res;
}

ShearReport splitting_shear_check(const WeightedSymbol& s, const Eigen::MatrixXd& shear,
                                  const ChernGridPlan& plan) {
  ShearReport rep;
  rep.shear = checked_shear(s.split(), shear);
  rep.reference = topological_index(s, plan);
  rep.sheared = topological_index(s, plan, rep.shear);
  rep.difference = std::abs(rep.reference.value - rep.sheared.value);
  rep.tolerance = std::max(1e-6, rep.reference.quadrature_error + rep.sheared.quadrature_error +
                                     rep.reference.tail_bound + rep.sheared.tail_bound);
  rep.agree = rep.difference <= rep.tolerance;
  return rep;
}

}  // namespace folidx
