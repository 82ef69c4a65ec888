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

#include "folidx/symbolics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "folidx/errors.hpp"
#include "folidx/linalg.hpp"

namespace folidx {

double FiberPoint::weighted_radius() const {
  double a = 0.0, b = 0.0;
  for (double v : xi) a += v * v;
  for (double v : eta) b += v * v;
  return std::pow(a * a + b, 0.25);
}

FiberPoint FiberPoint::dilated(double lambda) const {
  FiberPoint out = *this;
  for (double& v : out.xi) v *= lambda;
  for (double& v : out.eta) v *= lambda * lambda;
  return out;
}

FiberPoint FiberPoint::normalized() const {
  const double rho = weighted_radius();
  if (rho == 0.0) return *this;
  return dilated(1.0 / rho);
}

WeightedSymbol::WeightedSymbol(FoliationSplit split, int degree, int rank_in, int rank_out)
    : split_(split), degree_(degree), rank_in_(rank_in), rank_out_(rank_out) {
  split_.validate();
  if (degree < 0) throw InputError("WeightedSymbol: negative degree");
  if (rank_in < 1 || rank_out < 1) throw InputError("WeightedSymbol: ranks must be positive");
}

void WeightedSymbol::add_monomial(const MultiIndex& alpha, const TrigPoly& a) {
  if (weighted_order(alpha, split_) != degree_)
    throw InputError("WeightedSymbol: monomial weighted order differs from the symbol degree");
  if (a.rows() != rank_out_ || a.cols() != rank_in_ || a.dim() != split_.n())
    throw InputError("WeightedSymbol: coefficient shape mismatch");
  if (a.is_zero()) return;
  auto it = monomials_.find(alpha);
  if (it == monomials_.end())
    monomials_.emplace(alpha, a);
  else
    it->second = it->second + a;
}

WeightedSymbol::Frozen WeightedSymbol::frozen(std::span<const double> x) const {
  Frozen f;
  f.split_ = split_;
  f.rows_ = rank_out_;
  f.cols_ = rank_in_;
  for (const auto& [alpha, a] : monomials_) f.terms_.emplace_back(alpha.exponents(), a.evaluate(x));
  return f;
}

CMatrix WeightedSymbol::Frozen::at(std::span<const double> v) const {
  CMatrix out = CMatrix::Zero(rows_, cols_);
  for (const auto& [alpha, c] : terms_) {
    cplx m(1.0, 0.0);
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int r = 0; r < alpha[j]; ++r) m *= cplx(0.0, v[j]);
    out += m * c;
  }
  return out;
}

CMatrix WeightedSymbol::Frozen::at(const FiberPoint& f) const {
  if (static_cast<int>(f.xi.size()) != split_.p || static_cast<int>(f.eta.size()) != split_.q)
    throw InputError("WeightedSymbol: fiber point dimension mismatch");
  std::vector<double> v(f.xi);
  v.insert(v.end(), f.eta.begin(), f.eta.end());
  return at(std::span<const double>(v));
}

CMatrix WeightedSymbol::evaluate(std::span<const double> x, const FiberPoint& f) const {
  return frozen(x).at(f);
}

WeightedSymbol principal_symbol(const DiffOp& P) {
  const int d = op_weighted_order(P);
  WeightedSymbol s(P.split(), d, P.rank_in(), P.rank_out());
  for (const auto& [alpha, a] : P.monomials())
    if (weighted_order(alpha, P.split()) == d) s.add_monomial(alpha, a);
  return s;
}

WeightedSymbol classical_principal_symbol(const DiffOp& P) {
  const int d = op_classical_order(P);
  const FoliationSplit flat{P.dim(), 0};
  WeightedSymbol s(flat, d, P.rank_in(), P.rank_out());
  for (const auto& [alpha, a] : P.monomials())
    if (alpha.degree() == d) s.add_monomial(alpha, a);
  return s;
}

WeightedSymbol conjugate(const CMatrix& U, const WeightedSymbol& s) {
  WeightedSymbol out(s.split(), s.degree(), static_cast<int>(U.rows()),
                     static_cast<int>(U.rows()));
  CMatrix Uh = U.adjoint();
  for (const auto& [alpha, a] : s.monomials()) {
    TrigPoly t(s.split().n(), out.rank_out(), out.rank_in());
    for (const auto& [k, c] : a.terms()) t.add_term(k, U * c * Uh);
    out.add_monomial(alpha, t);
  }
  return out;
}

HomogeneityReport check_homogeneity(const WeightedSymbol& s, int samples, double lambda_min,
                                    double lambda_max, std::uint64_t seed, double tolerance) {
  if (samples < 1 || !(lambda_min > 0.0) || lambda_max < lambda_min)
    throw InputError("check_homogeneity: need samples >= 1 and 0 < lambda_min <= lambda_max");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lam(lambda_min, lambda_max);
  const FoliationSplit& sp = s.split();
  HomogeneityReport rep;
  rep.samples = samples;
  rep.tolerance = tolerance;
  for (int t = 0; t < samples; ++t) {
    std::vector<double> x(sp.n());
    for (double& v : x) v = angle(rng);
    FiberPoint f;
    f.xi.resize(sp.p);
    f.eta.resize(sp.q);
    for (double& v : f.xi) v = gauss(rng);
    for (double& v : f.eta) v = gauss(rng);
    const double l = lam(rng);
    const auto fr = s.frozen(x);
    const CMatrix lhs = fr.at(f.dilated(l));
    const CMatrix rhs = std::pow(l, s.degree()) * fr.at(f);
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    rep.max_relative_deviation = std::max(rep.max_relative_deviation, (lhs - rhs).norm() / scale);
  }
  rep.passed = rep.max_relative_deviation <= tolerance;
  return rep;
}

std::vector<FiberPoint> weighted_sphere_grid(const FoliationSplit& split, int angular) {
  split.validate();
  if (angular < 2) throw InputError("weighted_sphere_grid: need at least 2 angular points");
  const int n = split.n();
  std::vector<std::vector<double>> dirs;
  if (n == 1) {
    dirs = {{1.0}, {-1.0}};
  } else {
    std::vector<double> phi(n - 1, 0.0);
    std::vector<int> idx(n - 1, 0);
    while (true) {
      for (int a = 0; a < n - 1; ++a)
        phi[a] = (a < n - 2) ? std::numbers::pi * idx[a] / (angular - 1)
                             : 2.0 * std::numbers::pi * idx[a] / angular;
      std::vector<double> v(n);
      double sinprod = 1.0;
      for (int a = 0; a < n - 1; ++a) {
        v[a] = sinprod * std::cos(phi[a]);
        sinprod *= std::sin(phi[a]);
      }
      v[n - 1] = sinprod;
      for (double& c : v)
        if (std::abs(c) < 1e-14) c = 0.0;
      dirs.push_back(std::move(v));
      int a = n - 2;
      while (a >= 0 && ++idx[a] == angular) idx[a--] = 0;
      if (a < 0) break;
    }
  }
  std::vector<FiberPoint> out;
  out.reserve(dirs.size());
  for (const auto& v : dirs) {
    FiberPoint f;
    f.xi.assign(v.begin(), v.begin() + split.p);
    f.eta.assign(v.begin() + split.p, v.end());
    out.push_back(f.normalized());
  }
  return out;
}

namespace {

std::vector<std::vector<double>> uniform_base_grid(int n, int nodes) {
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(n, 0);
  const double h = 2.0 * std::numbers::pi / nodes;
  while (true) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = h * idx[i];
    pts.push_back(std::move(x));
    int a = n - 1;
    while (a >= 0 && ++idx[a] == nodes) idx[a--] = 0;
    if (a < 0) break;
  }
  return pts;
}

double smallest_sv(const CMatrix& M) {
  if (M.rows() == 1) return std::abs(M(0, 0));
  return linalg::smallest_singular_value(M);
}

}  // namespace

InvertibilityCertificate check_invertibility(const WeightedSymbol& s,
                                             const InvertibilityPlan& plan) {
  if (s.rank_in() != s.rank_out())
    throw InputError("check_invertibility: symbol is not square (m_E != m_F)");
  if (plan.angular < 2 || plan.base < 1 || plan.max_refinements < 1)
    throw InputError("check_invertibility: invalid resolution plan");
  InvertibilityCertificate cert;
  cert.degree = s.degree();
  cert.tolerance = plan.tolerance;
  const int n = s.split().n();
  double previous = -1.0;
  for (int r = 0; r <= plan.max_refinements; ++r) {
    const int A = plan.angular << r;
    const int B = plan.base << r;
    const auto sphere = weighted_sphere_grid(s.split(), A);
    const auto base = uniform_base_grid(n, B);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : base) {
      const auto fr = s.frozen(x);
      for (const auto& f : sphere) {
        const double v = smallest_sv(fr.at(f));
        if (v < best) {
          best = v;
          cert.witness_x = x;
          cert.witness_fiber = f;
        }
      }
    }
    cert.history.push_back(best);
    cert.s_min = best;
    cert.angular = A;
    cert.base = B;
    if (previous >= 0.0 && std::abs(best - previous) <= plan.stability * previous) {
      cert.converged = true;
      break;
    }
    previous = best;
  }
  cert.passed = cert.converged && cert.s_min >= plan.tolerance;
  if (cert.passed && s.split().q >= 1 && s.degree() % 2 != 0)
    throw InvariantViolation("check_invertibility: certified symbol of odd weighted degree " +
                             std::to_string(s.degree()) + " with q >= 1");
  return cert;
}

CMatrix graph_projection(const CMatrix& T) {
  const Eigen::Index mE = T.cols(), mF = T.rows();
  const CMatrix Th = T.adjoint();
  const CMatrix A = (CMatrix::Identity(mE, mE) + Th * T).llt().solve(CMatrix::Identity(mE, mE));
  CMatrix e(mE + mF, mE + mF);
  e.topLeftCorner(mE, mE) = A;
  e.topRightCorner(mE, mF) = A * Th;
  e.bottomLeftCorner(mF, mE) = T * A;
  e.bottomRightCorner(mF, mF) = T * A * Th;
  return e;
}

CMatrix graph_projection_alternate(const CMatrix& T) {
  const Eigen::Index mE = T.cols(), mF = T.rows();
  const CMatrix Th = T.adjoint();
  const CMatrix A = (CMatrix::Identity(mE, mE) + Th * T).llt().solve(CMatrix::Identity(mE, mE));
  const CMatrix B = (CMatrix::Identity(mF, mF) + T * Th).llt().solve(CMatrix::Identity(mF, mF));
  CMatrix e(mE + mF, mE + mF);
  e.topLeftCorner(mE, mE) = A;
  e.topRightCorner(mE, mF) = Th * B;
  e.bottomLeftCorner(mF, mE) = T * A;
  e.bottomRightCorner(mF, mF) = CMatrix::Identity(mF, mF) - B;
  return e;
}

CMatrix reference_projection(int m) {
  CMatrix e = CMatrix::Zero(2 * m, 2 * m);
  e.bottomRightCorner(m, m).setIdentity();
  return e;
}

DecayReport measure_decay(const WeightedSymbol& s, std::span<const double> radii, int directions,
                          std::uint64_t seed) {
  if (radii.size() < 2) throw InputError("measure_decay: need at least two radii");
  if (s.rank_in() != s.rank_out()) throw InputError("measure_decay: symbol is not square");
  const FoliationSplit& sp = s.split();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> xs;
  std::vector<FiberPoint> dirs;
  for (int t = 0; t < directions; ++t) {
    std::vector<double> x(sp.n());
    for (double& v : x) v = angle(rng);
    xs.push_back(std::move(x));
    FiberPoint f;
    f.xi.resize(sp.p);
    f.eta.resize(sp.q);
    for (double& v : f.xi) v = gauss(rng);
    for (double& v : f.eta) v = gauss(rng);
    dirs.push_back(f.normalized());
  }
  const CMatrix ref = reference_projection(s.rank_in());
  DecayReport rep;
  for (double rho : radii) {
    double dev = 0.0;
    for (int t = 0; t < directions; ++t) {
      const CMatrix e = graph_projection(s.evaluate(xs[t], dirs[t].dilated(rho)));
      dev = std::max(dev, linalg::hermitian_norm(e - ref));
    }
    rep.samples.emplace_back(rho, dev);
    rep.constant = std::max(rep.constant, dev * std::pow(rho, s.degree()));
  }
  // least-squares slope of log(dev) against log(rho)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(rep.samples.size());
  for (const auto& [rho, dev] : rep.samples) {
    const double lx = std::log(rho), ly = std::log(std::max(dev, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  rep.exponent = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
  rep.passed = rep.exponent >= 0.9 * s.degree();
  return rep;
}

ProjField symbol_projection_field(const WeightedSymbol& s, const ProjFieldGrid& grid,
                                  const InvertibilityCertificate& cert, std::uint64_t seed) {
  if (!cert.passed)
    throw UncertifiedError("symbol_projection_field: invertibility certificate did not pass");
  if (s.rank_in() != s.rank_out()) throw InputError("symbol_projection_field: symbol not square");
  const int m = s.rank_in();
  ProjField field;
  field.m = m;
  field.split = s.split();
  field.base_nodes = grid.base_nodes;
  field.base_points = uniform_base_grid(s.split().n(), grid.base_nodes);
  field.fiber_points = grid.fiber_points;
  field.values.reserve(field.base_points.size() * grid.fiber_points.size());
  for (const auto& x : field.base_points) {
    const auto fr = s.frozen(x);
    for (const auto& f : grid.fiber_points) {
      CMatrix e = graph_projection(fr.at(f));
      field.max_idempotence_defect = std::max(field.max_idempotence_defect, (e * e - e).norm());
      field.max_selfadjoint_defect =
          std::max(field.max_selfadjoint_defect, (e - e.adjoint()).norm());
      field.max_trace_defect = std::max(field.max_trace_defect, std::abs(e.trace() - double(m)));
      field.values.push_back(std::move(e));
    }
  }
  if (field.max_idempotence_defect > 1e-10 || field.max_selfadjoint_defect > 1e-10 ||
      field.max_trace_defect > 1e-8)
    throw InvariantViolation("symbol_projection_field: projection invariants violated");
  const double radii[] = {10.0, 20.0, 40.0, 80.0};
  field.decay = measure_decay(s, radii, 64, seed);
  return field;
}

}  // namespace folidx
