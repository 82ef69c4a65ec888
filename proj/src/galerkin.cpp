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

#include "folidx/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "folidx/errors.hpp"
#include "folidx/linalg.hpp"

namespace folidx {

ModeSet::ModeSet(int n, int K) : n_(n), K_(K) {
  if (n < 1 || K < 0) throw InputError("ModeSet: need n >= 1 and K >= 0");
  size_ = 1;
  for (int i = 0; i < n; ++i) size_ *= static_cast<std::size_t>(2 * K + 1);
}

std::optional<std::size_t> ModeSet::index(std::span<const int> k) const {
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i) {
    if (k[i] < -K_ || k[i] > K_) return std::nullopt;
    idx = idx * static_cast<std::size_t>(2 * K_ + 1) + static_cast<std::size_t>(k[i] + K_);
  }
  return idx;
}

Frequency ModeSet::mode(std::size_t i) const {
  Frequency k(n_);
  for (int a = n_ - 1; a >= 0; --a) {
    k[a] = static_cast<int>(i % static_cast<std::size_t>(2 * K_ + 1)) - K_;
    i /= static_cast<std::size_t>(2 * K_ + 1);
  }
  return k;
}

GalerkinMatrix galerkin_matrix(const DiffOp& P, int K) {
  if (P.is_zero()) throw InputError("galerkin_matrix: zero operator");
  if (K < 1 || K < P.bandwidth())
    throw InputError("galerkin_matrix: cutoff K = " + std::to_string(K) +
                     " must be >= max(1, coefficient bandwidth " +
                     std::to_string(P.bandwidth()) + ")");
  GalerkinMatrix G;
  G.K = K;
  G.K_codomain = K + P.bandwidth();
  G.rank_in = P.rank_in();
  G.rank_out = P.rank_out();
  G.domain = ModeSet(P.dim(), K);
  G.codomain = ModeSet(P.dim(), G.K_codomain);
  const int mE = G.rank_in, mF = G.rank_out, n = P.dim();
  G.matrix = CMatrix::Zero(static_cast<Eigen::Index>(G.codomain.size()) * mF,
                           static_cast<Eigen::Index>(G.domain.size()) * mE);
  std::vector<std::pair<std::vector<int>, const TrigPoly*>> monos;
  for (const auto& [alpha, a] : P.monomials()) monos.emplace_back(alpha.exponents(), &a);
  const auto cols = static_cast<std::ptrdiff_t>(G.domain.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t col = 0; col < cols; ++col) {
    const Frequency k = G.domain.mode(static_cast<std::size_t>(col));
    Frequency target(n);
    for (const auto& [alpha, a] : monos) {
      cplx f(1.0, 0.0);
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < alpha[i]; ++r) f *= cplx(0.0, k[i]);
      if (f == cplx(0.0, 0.0)) continue;
      for (const auto& [j, c] : a->terms()) {
        for (int i = 0; i < n; ++i) target[i] = k[i] + j[i];
        const std::size_t row = *G.codomain.index(target);
        G.matrix.block(static_cast<Eigen::Index>(row) * mF, col * mE, mF, mE) += f * c;
      }
    }
  }
  return G;
}

CVector to_coefficients(const TrigPoly& u, const ModeSet& modes) {
  if (u.cols() != 1 || u.dim() != modes.dim())
    throw InputError("to_coefficients: expected a column-vector section on T^n");
  const int m = u.rows();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(modes.size()) * m);
  for (const auto& [k, c] : u.terms()) {
    auto idx = modes.index(k);
    if (!idx) throw InputError("to_coefficients: section bandwidth exceeds the mode cutoff");
    v.segment(static_cast<Eigen::Index>(*idx) * m, m) = c.col(0);
  }
  return v;
}

TrigPoly from_coefficients(const CVector& v, const ModeSet& modes, int rank) {
  TrigPoly u(modes.dim(), rank, 1);
  for (std::size_t i = 0; i < modes.size(); ++i)
    u.add_term(modes.mode(i), v.segment(static_cast<Eigen::Index>(i) * rank, rank));
  return u;
}

CMatrix square_compression(const GalerkinMatrix& G) {
  const int mF = G.rank_out;
  CMatrix S(static_cast<Eigen::Index>(G.domain.size()) * mF, G.matrix.cols());
  for (std::size_t i = 0; i < G.domain.size(); ++i) {
    const std::size_t row = *G.codomain.index(G.domain.mode(i));
    S.middleRows(static_cast<Eigen::Index>(i) * mF, mF) =
        G.matrix.middleRows(static_cast<Eigen::Index>(row) * mF, mF);
  }
  return S;
}

SpectrumCount count_kernel(const Eigen::VectorXd& sdesc, std::size_t rows, std::size_t cols,
                           const IndexOptions& opt) {
  SpectrumCount sc;
  sc.rows = rows;
  sc.cols = cols;
  const int structural = cols > rows ? static_cast<int>(cols - rows) : 0;
  const Eigen::Index N = sdesc.size();
  std::vector<double> asc(sdesc.data(), sdesc.data() + N);
  std::reverse(asc.begin(), asc.end());
  sc.s_max = N > 0 ? asc.back() : 0.0;
  sc.tau = opt.relative_threshold * sc.s_max;
  int rel = 0;
  while (rel < N && asc[rel] < sc.tau) ++rel;
  // Largest multiplicative jump between neighbours; it only counts as a
  // kernel/bulk split when the lower side is below gap_ceiling times the
  // upper side. Scale-free, so the growth of s_max with K does not matter.
  int gap = 0;
  double best_ratio = 0.0;
  for (int c = 1; c < N; ++c) {
    const double ratio = asc[c] / std::max(asc[c - 1], std::numeric_limits<double>::min());
    if (ratio > best_ratio) {
      best_ratio = ratio;
      gap = c;
    }
  }
  if (best_ratio * opt.gap_ceiling <= 1.0) gap = 0;
  sc.relative = rel + structural;
  sc.gap = gap + structural;
  const int chosen = opt.rule == ThresholdRule::Relative ? rel : gap;
  sc.last_counted = chosen > 0 ? asc[chosen - 1] : 0.0;
  sc.first_uncounted = chosen < N ? asc[chosen] : std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::min<Eigen::Index>(N, 8); ++i) sc.smallest.push_back(asc[i]);
  return sc;
}

namespace {

int selected(const SpectrumCount& c, ThresholdRule r) {
  return r == ThresholdRule::Relative ? c.relative : c.gap;
}

}  // namespace

IndexReport numerical_index(const DiffOp& P, std::span<const int> cutoffs,
                            const IndexOptions& opt) {
  if (cutoffs.empty()) throw InputError("numerical_index: empty cutoff list");
  IndexReport rep;
  rep.rule = opt.rule;
  if (opt.certify) {
    if (P.rank_in() != P.rank_out()) {
      rep.cause = "non-square symbol: m_E != m_F";
    } else {
      rep.certificate = check_invertibility(principal_symbol(P), opt.plan);
      rep.certified = rep.certificate.passed;
      if (!rep.certified) rep.cause = "weighted principal symbol not certified invertible";
    }
  } else {
    rep.certified = true;
  }
  const DiffOp Pt = formal_adjoint(P);
  for (int K : cutoffs) {
    SweepEntry e;
    e.K = K;
    const GalerkinMatrix G = galerkin_matrix(P, K);
    const GalerkinMatrix Gt = galerkin_matrix(Pt, K);
    e.kernel = count_kernel(linalg::singular_values(G.matrix), G.matrix.rows(), G.matrix.cols(),
                            opt);
    e.cokernel = count_kernel(linalg::singular_values(Gt.matrix), Gt.matrix.rows(),
                              Gt.matrix.cols(), opt);
    e.dim_ker = selected(e.kernel, opt.rule);
    e.dim_coker = selected(e.cokernel, opt.rule);
    e.rules_agree = e.kernel.relative == e.kernel.gap && e.cokernel.relative == e.cokernel.gap;
    e.separated = e.kernel.first_uncounted > opt.separation_factor * e.kernel.tau &&
                  e.cokernel.first_uncounted > opt.separation_factor * e.cokernel.tau;
    rep.sweep.push_back(std::move(e));
  }
  const SweepEntry& last = rep.sweep.back();
  rep.dim_ker = last.dim_ker;
  rep.dim_coker = last.dim_coker;
  if (rep.sweep.size() < 3) {
    if (rep.cause.empty()) rep.cause = "fewer than three cutoffs: stabilization not assessed";
    return rep;
  }
  bool stable = true;
  for (std::size_t i = rep.sweep.size() - 3; i < rep.sweep.size(); ++i) {
    const SweepEntry& e = rep.sweep[i];
    stable = stable && e.rules_agree && e.separated && e.dim_ker == last.dim_ker &&
             e.dim_coker == last.dim_coker;
  }
  rep.stable = stable;
  if (!stable && rep.cause.empty())
    rep.cause = "counts not stable, rule-consistent and separated over the last three cutoffs";
  if (rep.stable && rep.certified) rep.index = rep.dim_ker - rep.dim_coker;
  return rep;
}

double weighted_sobolev_norm_squared(const TrigPoly& u, int d, const FoliationSplit& split) {
  if (d < 0) throw InputError("weighted_sobolev_norm: d must be nonnegative");
  if (u.dim() != split.n()) throw InputError("weighted_sobolev_norm: dimension mismatch");
  const auto alphas = multi_indices_up_to(d, split);
  double total = 0.0;
  for (const auto& [k, c] : u.terms()) {
    double w = 0.0;
    for (const auto& a : alphas) {
      double t = 1.0;
      for (int i = 0; i < a.size(); ++i) t *= std::pow(static_cast<double>(k[i]), 2 * a[i]);
      w += t;
    }
    total += c.squaredNorm() * w;
  }
  return total;
}

double weighted_sobolev_norm(const TrigPoly& u, int d, const FoliationSplit& split) {
  return std::sqrt(weighted_sobolev_norm_squared(u, d, split));
}

ProbeReport apriori_probe(const DiffOp& P, const DiffOp& A, int trials,
                          std::span<const int> cutoffs, std::uint64_t seed) {
  if (!(P.split() == A.split())) throw InputError("apriori_probe: split mismatch");
  if (P.rank_in() != A.rank_in()) throw InputError("apriori_probe: domain rank mismatch");
  if (op_weighted_order(A) > op_weighted_order(P))
    throw InputError("apriori_probe: A must have weighted order <= that of P");
  if (cutoffs.empty()) throw InputError("apriori_probe: empty cutoff list");
  const int n = P.dim(), m = P.rank_in();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto ratio = [&](const TrigPoly& u) {
    return apply(A, u).l2_norm() / (apply(P, u).l2_norm() + u.l2_norm());
  };
  ProbeReport rep;
  for (int K : cutoffs) {
    if (K < 0) throw InputError("apriori_probe: negative cutoff");
    ProbeEntry e;
    e.K = K;
    const ModeSet modes(n, K);
    for (int t = 0; t < trials; ++t) {
      TrigPoly u(n, m, 1);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        CMatrix c(m, 1);
        for (int r = 0; r < m; ++r) c(r, 0) = cplx(gauss(rng), gauss(rng));
        u.add_term(modes.mode(i), c);
      }
      e.c_random = std::max(e.c_random, ratio(u));
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const Frequency k = modes.mode(i);
      // best direction v in C^m for this mode: top generalized eigenvector of
      // (G_A, G_P + 1), then the actual ratio at that v
      CMatrix GA(m, m), GP(m, m);
      std::vector<TrigPoly> Au, Pu;
      for (int c = 0; c < m; ++c) {
        CMatrix v = CMatrix::Zero(m, 1);
        v(c, 0) = 1.0;
        const TrigPoly u = TrigPoly::exponential(k, v);
        Au.push_back(apply(A, u));
        Pu.push_back(apply(P, u));
      }
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          GA(a, b) = inner(Au[a], Au[b]);
          GP(a, b) = inner(Pu[a], Pu[b]);
        }
      CMatrix v(m, 1);
      if (m == 1) {
        v(0, 0) = 1.0;
      } else {
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(
            GA, GP + CMatrix::Identity(m, m));
        v = ges.eigenvectors().col(m - 1);
      }
      const double r = ratio(TrigPoly::exponential(k, v));
      if (r > e.c_modes) {
        e.c_modes = r;
        e.worst_mode = k;
      }
    }
    e.c_hat = std::max(e.c_random, e.c_modes);
    rep.sweep.push_back(std::move(e));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : rep.sweep) {
    lo = std::min(lo, e.c_hat);
    hi = std::max(hi, e.c_hat);
  }
  rep.variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
  rep.growth = rep.sweep.front().c_hat > 0.0 ? rep.sweep.back().c_hat / rep.sweep.front().c_hat
                                             : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace folidx
