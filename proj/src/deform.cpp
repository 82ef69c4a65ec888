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

#include "folidx/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "folidx/errors.hpp"
#include "folidx/linalg.hpp"

namespace folidx {

GradedPoint dilate(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t >= 0.0)) throw InputError("dilate: t must be >= 0");
  GradedPoint out{std::vector<double>(x.begin(), x.end()), std::vector<double>(y.begin(), y.end())};
  for (double& v : out.x) v *= t;
  for (double& v : out.y) v *= t * t;
  return out;
}

GradedPoint dilate_inverse(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw InputError("dilate_inverse: t must be > 0");
  return dilate(1.0 / t, x, y);
}

ChartMap foliated_diffeo(FoliationSplit split, ChartMap::Component f,
                         std::function<std::vector<double>(std::span<const double>)> g,
                         std::string name) {
  ChartMap phi;
  phi.split = split;
  phi.f = std::move(f);
  phi.g = [g = std::move(g)](std::span<const double>, std::span<const double> y) { return g(y); };
  phi.name = std::move(name);
  return phi;
}

namespace {

// Jacobian of component c with respect to the x (wrt_x) or y block at 0.
Eigen::MatrixXd jacobian_at_origin(const ChartMap::Component& c, int p, int q, int out_dim,
                                   bool wrt_x, double h) {
  const int n_in = wrt_x ? p : q;
  Eigen::MatrixXd J(out_dim, n_in);
  for (int j = 0; j < n_in; ++j) {
    std::vector<double> xp(p, 0.0), yp(q, 0.0), xm(p, 0.0), ym(q, 0.0);
    (wrt_x ? xp : yp)[j] = h;
    (wrt_x ? xm : ym)[j] = -h;
    const auto fp = c(xp, yp), fm = c(xm, ym);
    if (static_cast<int>(fp.size()) != out_dim || static_cast<int>(fm.size()) != out_dim)
      throw InputError("coordinate_law_check: component has the wrong output dimension");
    for (int i = 0; i < out_dim; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return J;
}

}  // namespace

std::vector<double> law_t_list(int count) {
  std::vector<double> ts;
  for (int i = 0; i < count; ++i) ts.push_back(0.5 / std::pow(2.0, i));
  return ts;
}

LawReport coordinate_law_check(const ChartMap& phi, const std::vector<GradedPoint>& points,
                               std::span<const double> ts, double fd_step) {
  const int p = phi.split.p, q = phi.split.q;
  if (!phi.f || (q > 0 && !phi.g)) throw InputError("coordinate_law_check: incomplete map");
  if (ts.size() < 2) throw InputError("coordinate_law_check: need at least two t values");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0 && ts[i] <= 0.5)) throw InputError("coordinate_law_check: t must lie in (0, 0.5]");
    if (i > 0 && !(ts[i] < ts[i - 1])) throw InputError("coordinate_law_check: t-list must decrease");
  }
  LawReport rep;
  rep.name = phi.name;
  rep.Dx_f = jacobian_at_origin(phi.f, p, q, p, true, fd_step);
  rep.Dy_g = q > 0 ? jacobian_at_origin(phi.g, p, q, q, false, fd_step) : Eigen::MatrixXd(0, 0);
  double scale = 0.0;
  for (double t : ts) {
    LawSample smp{t, 0.0};
    for (const auto& pt : points) {
      if (static_cast<int>(pt.x.size()) != p || static_cast<int>(pt.y.size()) != q)
        throw InputError("coordinate_law_check: point dimension mismatch");
      const GradedPoint d = dilate(t, pt.x, pt.y);
      const auto fx = phi.f(d.x, d.y);
      const auto gy = q > 0 ? phi.g(d.x, d.y) : std::vector<double>{};
      const GradedPoint back = dilate_inverse(t, fx, gy);
      const Eigen::Map<const Eigen::VectorXd> x(pt.x.data(), p), y(pt.y.data(), q);
      const Eigen::VectorXd Lx = rep.Dx_f * x;
      double dev2 = 0.0;
      for (int i = 0; i < p; ++i) dev2 += std::pow(back.x[i] - Lx[i], 2);
      if (q > 0) {
        const Eigen::VectorXd Ly = rep.Dy_g * y;
        for (int i = 0; i < q; ++i) dev2 += std::pow(back.y[i] - Ly[i], 2);
        scale = std::max(scale, Ly.norm());
      }
      scale = std::max(scale, Lx.norm());
      smp.deviation = std::max(smp.deviation, std::sqrt(dev2));
    }
    rep.samples.push_back(smp);
  }
  // Roundoff of the central differences makes "exactly zero" mean small
  // compared with h^2 times the point scale.
  const double floor = 1e-7 * std::max(1.0, scale);
  rep.exact = std::all_of(rep.samples.begin(), rep.samples.end(),
                          [&](const LawSample& s) { return s.deviation <= floor; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& s : rep.samples) {
    const double lx = std::log(s.t), ly = std::log(std::max(s.deviation, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  rep.order = rep.exact ? std::numeric_limits<double>::infinity()
                        : (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.passed = rep.exact || rep.order >= rep.min_order;
  return rep;
}

DiffOp freeze_coefficients(const DiffOp& P, std::span<const double> x0) {
  if (P.is_zero()) throw InputError("freeze_coefficients: zero operator");
  if (static_cast<int>(x0.size()) != P.dim()) throw InputError("freeze_coefficients: base point dimension");
  const int d = op_weighted_order(P);
  DiffOp out(P.split(), P.rank_in(), P.rank_out());
  for (const auto& [alpha, a] : P.monomials())
    if (weighted_order(alpha, P.split()) == d)
      out.add_monomial(alpha, TrigPoly::constant(P.dim(), a.evaluate(x0)));
  return out;
}

std::vector<double> homotopy_t_grid(double t_max) {
  std::vector<double> ts;
  for (double t = 1.0; t <= t_max * (1 + 1e-12); t *= 2.0) ts.push_back(t);
  return ts;
}

CMatrix dense_scaled_projection(const CMatrix& M, double scale) {
  return graph_projection(scale * M);
}

namespace {

struct Spectrum {
  Eigen::VectorXd s;  // descending, length min(rows, cols)
  int kernel = 0;     // counted (relative rule), including the structural part
  std::size_t rows = 0, cols = 0;
};

Spectrum spectrum_of(const DiffOp& P, int K, const IndexOptions& opt) {
  const GalerkinMatrix G = galerkin_matrix(P, K);
  Spectrum sp;
  sp.s = linalg::singular_values(G.matrix);
  sp.rows = G.matrix.rows();
  sp.cols = G.matrix.cols();
  IndexOptions o = opt;
  o.rule = ThresholdRule::Relative;
  sp.kernel = count_kernel(sp.s, sp.rows, sp.cols, o).relative;
  return sp;
}

// Sum of 1/(1+x^2) over the domain side: the trace of the upper-left block.
double trace_upper_left(const Spectrum& sp, double scale) {
  double tr = static_cast<double>(sp.cols) - static_cast<double>(sp.s.size());
  for (Eigen::Index i = 0; i < sp.s.size(); ++i) {
    const double x = scale * sp.s[i];
    tr += 1.0 / (1.0 + x * x);
  }
  return tr;
}

}  // namespace

HomotopyTrace projection_homotopy(const DiffOp& P, std::span<const double> ts, int K,
                                  const IndexOptions& opt) {
  if (ts.empty()) throw InputError("projection_homotopy: empty t-grid");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0)) throw InputError("projection_homotopy: t must be > 0");
    if (i > 0 && !(ts[i] > ts[i - 1])) throw InputError("projection_homotopy: t-grid must increase");
  }
  HomotopyTrace h;
  h.K = K;
  h.degree = op_weighted_order(P);
  const Spectrum sp = spectrum_of(P, K, opt);
  const Spectrum spt = spectrum_of(formal_adjoint(P), K, opt);
  h.rows = sp.rows;
  h.cols = sp.cols;
  h.dim_ker = sp.kernel;
  h.dim_coker = spt.kernel;
  // Paired singular values below the cut belong to the kernel side of e_inf.
  const Eigen::Index paired = sp.s.size();
  const int structural = sp.cols > sp.rows ? static_cast<int>(sp.cols - sp.rows) : 0;
  const Eigen::Index paired_kernel = std::min<Eigen::Index>(paired, sp.kernel - structural);

  std::vector<std::vector<double>> angles;  // per t, per pair: atan(x)
  for (double t : ts) {
    HomotopyPoint pt;
    pt.t = t;
    pt.scale = std::pow(t, h.degree);
    std::vector<double> th(paired);
    for (Eigen::Index i = 0; i < paired; ++i) {
      const double x = pt.scale * sp.s[i];
      th[i] = std::atan(x);
      const double a = 1.0 / (1.0 + x * x), b = x / (1.0 + x * x);
      const bool in_kernel = i >= paired - paired_kernel;
      const double diag = in_kernel ? x * x / (1.0 + x * x) : a;
      const double block = in_kernel ? x / std::sqrt(1.0 + x * x) : 1.0 / std::sqrt(1.0 + x * x);
      pt.distance_to_limit = std::max(pt.distance_to_limit, block);
      pt.upper_left = std::max(pt.upper_left, diag);
      pt.upper_right = std::max(pt.upper_right, b);
      pt.lower_right = std::max(pt.lower_right, diag);
    }
    pt.trace_upper_left = trace_upper_left(sp, pt.scale);
    pt.trace_upper_left_adjoint = trace_upper_left(spt, pt.scale);
    pt.trace_shifted = static_cast<double>(sp.cols) - static_cast<double>(sp.rows);
    angles.push_back(std::move(th));
    h.points.push_back(pt);
  }
  for (std::size_t j = 1; j < ts.size(); ++j) {
    double diff = 0.0;
    for (Eigen::Index i = 0; i < paired; ++i)
      diff = std::max(diff, std::abs(std::sin(angles[j][i] - angles[j - 1][i])));
    h.lipschitz = std::max(h.lipschitz, diff / (ts[j] - ts[j - 1]));
  }
  h.monotone = true;
  for (std::size_t j = 1; j < h.points.size(); ++j)
    if (h.points[j - 1].t >= h.monotone_from &&
        h.points[j].distance_to_limit > h.points[j - 1].distance_to_limit * (1.0 + 1e-12))
      h.monotone = false;
  h.flagged = !h.monotone;
  const HomotopyPoint& last = h.points.back();
  h.trace_index = last.trace_upper_left - last.trace_upper_left_adjoint;
  h.trace_consistent = std::abs(h.trace_index - (h.dim_ker - h.dim_coker)) < 1e-2;
  return h;
}

void write_homotopy_csv(std::ostream& os, const HomotopyTrace& h) {
  os << "t,scale,distance_to_limit,upper_left,upper_right,lower_right,trace_upper_left,"
        "trace_upper_left_adjoint,trace_shifted\n";
  os.precision(17);
  for (const auto& p : h.points)
    os << p.t << ',' << p.scale << ',' << p.distance_to_limit << ',' << p.upper_left << ','
       << p.upper_right << ',' << p.lower_right << ',' << p.trace_upper_left << ','
       << p.trace_upper_left_adjoint << ',' << p.trace_shifted << '\n';
}

}  // namespace folidx
