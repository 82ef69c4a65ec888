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

#include "folidx/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "folidx/errors.hpp"

namespace folidx {
namespace {

// JSON has no inf/nan; emit null so reports stay valid and deterministic.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json fiber(const FiberPoint& f) { return {{"xi", vec(f.xi)}, {"eta", vec(f.eta)}}; }

const char* rule_name(ThresholdRule r) { return r == ThresholdRule::Relative ? "relative" : "gap"; }

json count(const SpectrumCount& c) {
  return {{"rows", c.rows},         {"cols", c.cols},   {"relative", c.relative},
          {"gap", c.gap},           {"tau", num(c.tau)}, {"s_max", num(c.s_max)},
          {"last_counted", num(c.last_counted)}, {"first_uncounted", num(c.first_uncounted)},
          {"smallest", vec(c.smallest)}};
}

}  // namespace

json to_json(const TrigPoly& a) {
  json terms = json::array();
  for (const auto& [k, c] : a.terms()) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < c.rows(); ++r) {
      json rr = json::array(), ii = json::array();
      for (int s = 0; s < c.cols(); ++s) {
        rr.push_back(c(r, s).real());
        ii.push_back(c(r, s).imag());
      }
      re.push_back(rr);
      im.push_back(ii);
    }
    terms.push_back({{"k", k}, {"re", re}, {"im", im}});
  }
  return terms;
}

TrigPoly trigpoly_from_json(const json& j, int dim) {
  if (!j.is_array()) throw InputError("trigpoly: expected an array of terms");
  if (j.empty()) throw InputError("trigpoly: empty term list");
  int rows = -1, cols = -1;
  TrigPoly out;
  for (const auto& t : j) {
    const auto k = t.at("k").get<std::vector<int>>();
    const auto& re = t.at("re");
    const auto& im = t.at("im");
    if (static_cast<int>(k.size()) != dim) throw InputError("trigpoly: frequency length != n");
    if (!re.is_array() || re.empty() || re.size() != im.size())
      throw InputError("trigpoly: re/im shape mismatch");
    const int r = static_cast<int>(re.size()), c = static_cast<int>(re[0].size());
    if (rows < 0) {
      rows = r;
      cols = c;
      out = TrigPoly(dim, rows, cols);
    } else if (r != rows || c != cols) {
      throw InputError("trigpoly: inconsistent coefficient shapes");
    }
    CMatrix m(r, c);
    for (int a = 0; a < r; ++a) {
      if (static_cast<int>(re[a].size()) != c || static_cast<int>(im[a].size()) != c)
        throw InputError("trigpoly: ragged coefficient matrix");
      for (int b = 0; b < c; ++b) m(a, b) = cplx(re[a][b].get<double>(), im[a][b].get<double>());
    }
    out.add_term(k, m);
  }
  return out;
}

json to_json(const DiffOp& P) {
  json monos = json::array();
  for (const auto& [alpha, a] : P.monomials())
    monos.push_back({{"alpha", alpha.exponents()}, {"coefficient", to_json(a)}});
  return {{"format", kDiffOpFormat},
          {"split", {P.split().p, P.split().q}},
          {"rank_in", P.rank_in()},
          {"rank_out", P.rank_out()},
          {"monomials", monos}};
}

DiffOp diffop_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kDiffOpFormat)
      throw InputError("diffop: unsupported format '" + j.at("format").get<std::string>() + "'");
    const auto sp = j.at("split").get<std::vector<int>>();
    if (sp.size() != 2) throw InputError("diffop: split must be [p, q]");
    const FoliationSplit split{sp[0], sp[1]};
    split.validate();
    DiffOp P(split, j.at("rank_in").get<int>(), j.at("rank_out").get<int>());
    for (const auto& m : j.at("monomials")) {
      const MultiIndex alpha(m.at("alpha").get<std::vector<int>>());
      P.add_monomial(alpha, trigpoly_from_json(m.at("coefficient"), split.n()));
    }
    return P;
  } catch (const json::exception& e) {
    throw InputError(std::string("diffop: malformed document: ") + e.what());
  }
}

json to_json(const HomogeneityReport& r) {
  return {{"samples", r.samples},
          {"max_relative_deviation", num(r.max_relative_deviation)},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

json to_json(const InvertibilityCertificate& c) {
  return {{"passed", c.passed},          {"converged", c.converged},
          {"degree", c.degree},          {"s_min", num(c.s_min)},
          {"tolerance", c.tolerance},    {"witness_x", vec(c.witness_x)},
          {"witness_fiber", fiber(c.witness_fiber)},
          {"angular", c.angular},        {"base", c.base},
          {"history", vec(c.history)}};
}

json to_json(const DecayReport& d) {
  json s = json::array();
  for (const auto& [rho, dev] : d.samples) s.push_back({num(rho), num(dev)});
  return {{"exponent", num(d.exponent)}, {"constant", num(d.constant)}, {"passed", d.passed}, {"samples", s}};
}

json to_json(const IndexReport& r) {
  json sweep = json::array();
  for (const auto& e : r.sweep)
    sweep.push_back({{"K", e.K},
                     {"dim_ker", e.dim_ker},
                     {"dim_coker", e.dim_coker},
                     {"rules_agree", e.rules_agree},
                     {"separated", e.separated},
                     {"kernel", count(e.kernel)},
                     {"cokernel", count(e.cokernel)}});
  return {{"certified", r.certified},
          {"stable", r.stable},
          {"index", r.index ? json(*r.index) : json(nullptr)},
          {"dim_ker", r.dim_ker},
          {"dim_coker", r.dim_coker},
          {"rule", rule_name(r.rule)},
          {"cokernel_source", r.cokernel_source},
          {"cause", r.cause},
          {"certificate", to_json(r.certificate)},
          {"sweep", sweep}};
}

json to_json(const ChernConvention& c) {
  return {{"sign", c.sign}, {"c2", c.c2}, {"orientation", c.orientation}, {"calibration", c.calibration}};
}

json to_json(const ChernResult& r) {
  json table = json::array();
  for (const auto& l : r.table)
    table.push_back({{"R", l.radius},
                     {"base_nodes", l.base_nodes},
                     {"fiber_nodes", l.fiber_nodes},
                     {"h_base", l.h_base},
                     {"h_fiber", l.h_fiber},
                     {"integral", num(l.integral)},
                     {"smoothness", num(l.smoothness)}});
  json ex = json::array();
  for (const auto& [R, v] : r.extrapolated) ex.push_back({{"R", R}, {"value", num(v)}});
  return {{"value", num(r.value)},
          {"nearest_integer", r.nearest_integer},
          {"distance_to_integer", num(r.distance_to_integer)},
          {"flagged", r.flagged},
          {"quadrature_error", num(r.quadrature_error)},
          {"tail_bound", num(r.tail_bound)},
          {"decay_exponent", num(r.decay_exponent)},
          {"extrapolated", ex},
          {"table", table},
          {"convention", to_json(r.convention)},
          {"certificate", to_json(r.certificate)}};
}

json to_json(const ShearReport& r) {
  json S = json::array();
  for (int i = 0; i < r.shear.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < r.shear.cols(); ++j) row.push_back(r.shear(i, j));
    S.push_back(row);
  }
  return {{"shear", S},
          {"reference", num(r.reference.value)},
          {"sheared", num(r.sheared.value)},
          {"difference", num(r.difference)},
          {"tolerance", num(r.tolerance)},
          {"agree", r.agree}};
}

json to_json(const ProbeReport& r) {
  json sweep = json::array();
  for (const auto& e : r.sweep)
    sweep.push_back({{"K", e.K},
                     {"c_hat", num(e.c_hat)},
                     {"c_random", num(e.c_random)},
                     {"c_modes", num(e.c_modes)},
                     {"worst_mode", e.worst_mode}});
  return {{"sweep", sweep}, {"variation", num(r.variation)}, {"growth", num(r.growth)}};
}

json to_json(const LawReport& r) {
  json s = json::array();
  for (const auto& x : r.samples) s.push_back({{"t", x.t}, {"deviation", num(x.deviation)}});
  return {{"name", r.name},   {"order", num(r.order)}, {"exact", r.exact},
          {"passed", r.passed}, {"min_order", r.min_order}, {"samples", s}};
}

json to_json(const HomotopyTrace& h) {
  json pts = json::array();
  for (const auto& p : h.points)
    pts.push_back({{"t", p.t},
                   {"scale", p.scale},
                   {"distance_to_limit", num(p.distance_to_limit)},
                   {"upper_left", num(p.upper_left)},
                   {"upper_right", num(p.upper_right)},
                   {"lower_right", num(p.lower_right)},
                   {"trace_upper_left", num(p.trace_upper_left)},
                   {"trace_upper_left_adjoint", num(p.trace_upper_left_adjoint)},
                   {"trace_shifted", num(p.trace_shifted)}});
  return {{"K", h.K},
          {"degree", h.degree},
          {"rows", h.rows},
          {"cols", h.cols},
          {"dim_ker", h.dim_ker},
          {"dim_coker", h.dim_coker},
          {"lipschitz", num(h.lipschitz)},
          {"monotone_from", h.monotone_from},
          {"monotone", h.monotone},
          {"flagged", h.flagged},
          {"trace_index", num(h.trace_index)},
          {"trace_consistent", h.trace_consistent},
          {"points", pts}};
}

namespace {

constexpr char kMagic[8] = {'F', 'O', 'L', 'I', 'D', 'X', 'P', 'F'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("projfield: truncated stream");
  return v;
}

}  // namespace

void write_projfield(std::ostream& os, const ProjField& f) {
  const int n = f.split.n();
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, 1);
  put<std::int32_t>(os, f.split.p);
  put<std::int32_t>(os, f.split.q);
  put<std::int32_t>(os, f.m);
  put<std::int32_t>(os, f.base_nodes);
  put<std::uint64_t>(os, f.base_points.size());
  put<std::uint64_t>(os, f.fiber_points.size());
  for (const auto& x : f.base_points)
    for (int i = 0; i < n; ++i) put<double>(os, x[i]);
  for (const auto& fp : f.fiber_points) {
    for (double v : fp.xi) put<double>(os, v);
    for (double v : fp.eta) put<double>(os, v);
  }
  for (const auto& e : f.values)
    for (int r = 0; r < e.rows(); ++r)
      for (int c = 0; c < e.cols(); ++c) {
        put<double>(os, e(r, c).real());
        put<double>(os, e(r, c).imag());
      }
}

ProjField read_projfield(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw InputError("projfield: bad magic");
  if (get<std::uint32_t>(is) != 1) throw InputError("projfield: unsupported version");
  ProjField f;
  f.split.p = get<std::int32_t>(is);
  f.split.q = get<std::int32_t>(is);
  f.m = get<std::int32_t>(is);
  f.base_nodes = get<std::int32_t>(is);
  const auto nb = get<std::uint64_t>(is), nf = get<std::uint64_t>(is);
  const int n = f.split.n();
  if (n < 1 || f.m < 1) throw InputError("projfield: bad header");
  f.base_points.assign(nb, std::vector<double>(n));
  for (auto& x : f.base_points)
    for (auto& v : x) v = get<double>(is);
  f.fiber_points.resize(nf);
  for (auto& fp : f.fiber_points) {
    fp.xi.resize(f.split.p);
    fp.eta.resize(f.split.q);
    for (auto& v : fp.xi) v = get<double>(is);
    for (auto& v : fp.eta) v = get<double>(is);
  }
  f.values.assign(nb * nf, CMatrix(2 * f.m, 2 * f.m));
  for (auto& e : f.values)
    for (int r = 0; r < e.rows(); ++r)
      for (int c = 0; c < e.cols(); ++c) {
        const double re = get<double>(is);
        e(r, c) = cplx(re, get<double>(is));
      }
  return f;
}

void write_sweep_csv(std::ostream& os, const IndexReport& r) {
  os << "K,side,rows,cols,relative,gap,tau,s_max,first_uncounted,smallest\n";
  os.precision(17);
  for (const auto& e : r.sweep)
    for (int side = 0; side < 2; ++side) {
      const SpectrumCount& c = side ? e.cokernel : e.kernel;
      os << e.K << ',' << (side ? "cokernel" : "kernel") << ',' << c.rows << ',' << c.cols << ','
         << c.relative << ',' << c.gap << ',' << c.tau << ',' << c.s_max << ',' << c.first_uncounted
         << ',' << (c.smallest.empty() ? 0.0 : c.smallest.front()) << '\n';
    }
}

void write_probe_csv(std::ostream& os, const ProbeReport& r) {
  os << "K,c_hat,c_random,c_modes\n";
  os.precision(17);
  for (const auto& e : r.sweep) os << e.K << ',' << e.c_hat << ',' << e.c_random << ',' << e.c_modes << '\n';
}

void write_chern_table_csv(std::ostream& os, const ChernResult& r) {
  os << "R,base_nodes,fiber_nodes,h_base,h_fiber,integral,smoothness\n";
  os.precision(17);
  for (const auto& l : r.table)
    os << l.radius << ',' << l.base_nodes << ',' << l.fiber_nodes << ',' << l.h_base << ','
       << l.h_fiber << ',' << l.integral << ',' << l.smoothness << '\n';
}

namespace {

void render(std::ostringstream& os, const json& j, int indent, const std::string& key) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    if (!key.empty()) os << pad << key << ":\n";
    for (auto it = j.begin(); it != j.end(); ++it) render(os, it.value(), key.empty() ? indent : indent + 1, it.key());
  } else if (j.is_array() && !j.empty() && (j.front().is_object())) {
    os << pad << key << ":\n";
    for (std::size_t i = 0; i < j.size(); ++i) render(os, j[i], indent + 1, "[" + std::to_string(i) + "]");
  } else {
    os << pad << key << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string render_text(const json& j) {
  std::ostringstream os;
  render(os, j, 0, "");
  return os.str();
}

}  // namespace folidx
