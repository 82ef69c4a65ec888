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

#include "folidx/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "folidx/catalog.hpp"
#include "folidx/errors.hpp"
#include "folidx/parser.hpp"

#ifndef FOLIDX_VERSION
#define FOLIDX_VERSION "unknown"
#endif

namespace folidx {
namespace {

struct Abort {
  int code;
  std::string cause;
  std::string detail;
};

json header(const std::string& cmd, const RunConfig& cfg) {
  json h;
  h["tool"] = "folidx";
  h["version"] = FOLIDX_VERSION;
  h["command"] = cmd;
  h["split"] = {cfg.split.p, cfg.split.q};
  h["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  h["sign_convention"] = to_json(cfg.convention);
  return h;
}

std::uint64_t require_seed(const RunConfig& cfg, const char* stage) {
  if (!cfg.seed) throw InputError(std::string(stage) + " uses randomized sampling: a seed is mandatory (--seed)");
  return *cfg.seed;
}

template <class F>
std::string capture(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

void cmd_symbol(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const WeightedSymbol s = principal_symbol(P);
  DiffOp top(P.split(), P.rank_in(), P.rank_out());
  for (const auto& [alpha, a] : s.monomials()) top.add_monomial(alpha, a);
  const auto h = check_homogeneity(s, cfg.homogeneity_samples, 0.5, 4.0, require_seed(cfg, "symbol"),
                                   cfg.homogeneity_tolerance);
  r.report["weighted_degree"] = s.degree();
  r.report["principal_part"] = print(top);
  r.report["homogeneity"] = to_json(h);
  r.exit_code = h.passed ? kExitOk : kExitFailed;
  const auto cert = check_invertibility(s, cfg.index.plan);
  if (!cert.passed) return;
  ProjFieldGrid grid;
  grid.base_nodes = 8;
  for (const double lambda : {1.0, 2.0, 4.0})
    for (FiberPoint f : weighted_sphere_grid(s.split(), 8)) {
      for (double& v : f.xi) v *= lambda;
      for (double& v : f.eta) v *= lambda * lambda;
      grid.fiber_points.push_back(std::move(f));
    }
  const ProjField field = symbol_projection_field(s, grid, cert, *cfg.seed);
  r.report["projection_field"] = {{"file", "projfield.bin"},
                                  {"max_idempotence_defect", field.max_idempotence_defect},
                                  {"max_selfadjoint_defect", field.max_selfadjoint_defect},
                                  {"max_trace_defect", field.max_trace_defect},
                                  {"decay_exponent", field.decay.exponent}};
  r.side_files.emplace_back("projfield.bin", capture([&](std::ostream& os) { write_projfield(os, field); }));
}

void cmd_check(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const auto cert = check_invertibility(principal_symbol(P), cfg.index.plan);
  r.report["certificate"] = to_json(cert);
  r.exit_code = cert.passed ? kExitOk : kExitFailed;
}

IndexReport analytic(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const IndexReport rep = numerical_index(P, cfg.cutoffs, cfg.index);
  r.report["analytic"] = to_json(rep);
  r.side_files.emplace_back("sweep.csv", capture([&](std::ostream& os) { write_sweep_csv(os, rep); }));
  return rep;
}

std::optional<ChernResult> topological(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const WeightedSymbol s = principal_symbol(P);
  try {
    const ChernResult c = topological_index(s, cfg.chern);
    r.report["topological"] = to_json(c);
    r.side_files.emplace_back("chern_table.csv", capture([&](std::ostream& os) { write_chern_table_csv(os, c); }));
    try {
      const FormGrid g = sample_form_grid(s, {.base_nodes = cfg.chern.base_nodes, .fiber_nodes = cfg.chern.base_nodes,
                                              .radius = cfg.chern.radii.front()});
      const auto density = chern_density(g, exterior_derivative(g, 1.0), cfg.convention);
      r.side_files.emplace_back("density_slice.csv", capture([&](std::ostream& os) {
                                  write_density_slice_csv(os, g, density, 2, 3, {0, 0, 0, 0});
                                }));
    } catch (const RefineGridError&) {
    }
    return c;
  } catch (const UncertifiedError& e) {
    r.report["topological"] = {{"status", "aborted"}, {"cause", "uncertified"}, {"detail", e.what()}};
    return std::nullopt;
  }
}

void cmd_index_analytic(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const IndexReport rep = analytic(P, cfg, r);
  r.exit_code = rep.index ? kExitOk : kExitFailed;
  if (!rep.certified) r.report["cause"] = "uncertified";
  else if (!rep.stable) r.report["cause"] = "unstable";
}

void cmd_index_topological(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const auto c = topological(P, cfg, r);
  if (!c) {
    r.report["cause"] = "uncertified";
    r.exit_code = kExitFailed;
    return;
  }
  bool ok = !c->flagged;
  json shears = json::array();
  for (double sv : cfg.shears) {
    const Eigen::MatrixXd S = Eigen::MatrixXd::Constant(P.split().q, P.split().p, sv);
    const ShearReport sr = splitting_shear_check(principal_symbol(P), S, cfg.chern);
    shears.push_back(to_json(sr));
    ok = ok && sr.agree;
  }
  if (!cfg.shears.empty()) r.report["shear_checks"] = shears;
  r.exit_code = ok ? kExitOk : kExitFailed;
}

void cmd_verify(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const IndexReport a = analytic(P, cfg, r);
  if (!a.certified) {
    r.report["verdict"] = {{"agree", false}, {"cause", "uncertified"}};
    r.exit_code = kExitFailed;
    return;
  }
  const auto t = topological(P, cfg, r);
  json v;
  v["analytic_index"] = a.index ? json(*a.index) : json(nullptr);
  v["topological_index"] = t ? json(t->nearest_integer) : json(nullptr);
  bool agree = a.index && t && !t->flagged && t->nearest_integer == *a.index;
  v["agree"] = agree;
  if (!a.index) v["cause"] = "analytic index unstable";
  else if (!t) v["cause"] = "uncertified";
  else if (t->flagged) v["cause"] = "topological integral not near an integer";
  else if (!agree) v["cause"] = "indices differ";
  r.report["verdict"] = v;
  r.exit_code = agree ? kExitOk : kExitFailed;
}

void cmd_estimates(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  const std::uint64_t seed = require_seed(cfg, "estimates");
  std::string probe = cfg.probe_expr;
  if (probe.empty()) probe = cfg.split.q > 0 ? "D[y1]" : "D[x" + std::to_string(cfg.split.p) + "]";
  DiffOp A = parse_operator(probe, cfg.split);
  if (A.rank_in() == 1 && P.rank_in() > 1) {
    DiffOp B(A.split(), P.rank_in(), P.rank_in());
    for (const auto& [alpha, a] : A.monomials()) B.add_monomial(alpha, a.broadcast(P.rank_in()));
    A = B;
  }
  const ProbeReport rep = apriori_probe(P, A, cfg.probe_trials, cfg.probe_cutoffs, seed);
  r.report["probe_operator"] = print(A);
  r.report["estimates"] = to_json(rep);
  r.side_files.emplace_back("probe.csv", capture([&](std::ostream& os) { write_probe_csv(os, rep); }));
  r.exit_code = kExitOk;
}

void cmd_deform(const DiffOp& P, const RunConfig& cfg, RunResult& r) {
  bool ok = true;
  json laws = json::array();
  const auto ts = law_t_list(cfg.law_steps);
  for (const auto& phi : catalog::foliated_maps()) {
    if (!(phi.split == cfg.split)) continue;
    const LawReport lr = coordinate_law_check(phi, catalog::law_points(phi.split), ts);
    json j = to_json(lr);
    j["foliated"] = true;
    laws.push_back(j);
    ok = ok && lr.passed;
  }
  for (const auto& phi : catalog::non_foliated_controls()) {
    if (!(phi.split == cfg.split)) continue;
    const LawReport lr = coordinate_law_check(phi, catalog::law_points(phi.split), ts);
    json j = to_json(lr);
    j["foliated"] = false;
    j["detected"] = !lr.passed;
    laws.push_back(j);
    ok = ok && !lr.passed;
  }
  r.report["coordinate_law"] = laws;
  if (!cfg.base_point.empty()) r.report["frozen"] = print(freeze_coefficients(P, cfg.base_point));

  std::vector<int> sweep{std::max(1, cfg.homotopy_K - 4), std::max(1, cfg.homotopy_K - 2), cfg.homotopy_K};
  const IndexReport pre = numerical_index(P, sweep, cfg.index);
  if (!pre.stable) {
    r.report["homotopy"] = {{"status", "aborted"}, {"cause", pre.certified ? "unstable" : "uncertified"}};
    r.exit_code = kExitFailed;
    return;
  }
  const auto grid = homotopy_t_grid(cfg.homotopy_t_max);
  const HomotopyTrace h = projection_homotopy(P, grid, cfg.homotopy_K, cfg.index);
  r.report["homotopy"] = to_json(h);
  r.side_files.emplace_back("homotopy.csv", capture([&](std::ostream& os) { write_homotopy_csv(os, h); }));
  ok = ok && !h.flagged && h.trace_consistent;
  r.exit_code = ok ? kExitOk : kExitFailed;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"symbol", "check", "index-analytic", "index-topological",
                                              "verify", "estimates", "deform"};
  return names;
}

RunResult run(const std::string& cmd, const RunConfig& cfg) {
  RunResult r;
  r.report = header(cmd, cfg);
  auto fail = [&](int code, const std::string& cause, const std::string& detail) {
    r.exit_code = code;
    r.report["status"] = "error";
    r.report["cause"] = cause;
    r.report["detail"] = detail;
  };
  try {
    if (std::find(subcommands().begin(), subcommands().end(), cmd) == subcommands().end())
      throw InputError("unknown subcommand '" + cmd + "'");
    cfg.validate();
    const DiffOp P = load_operator(cfg);
    r.report["operator"] = print(P);
    if (cmd == "symbol") cmd_symbol(P, cfg, r);
    else if (cmd == "check") cmd_check(P, cfg, r);
    else if (cmd == "index-analytic") cmd_index_analytic(P, cfg, r);
    else if (cmd == "index-topological") cmd_index_topological(P, cfg, r);
    else if (cmd == "verify") cmd_verify(P, cfg, r);
    else if (cmd == "estimates") cmd_estimates(P, cfg, r);
    else cmd_deform(P, cfg, r);
    r.report["status"] = r.exit_code == kExitOk ? "ok" : "failed";
  } catch (const ParseError& e) {
    fail(kExitInput, "parse_error", e.what());
    r.report["location"] = {{"line", e.line()}, {"column", e.column()}};
  } catch (const InputError& e) {
    fail(kExitInput, "input_error", e.what());
  } catch (const RefineGridError& e) {
    fail(kExitRefine, "refine_grid", e.what());
  } catch (const UncertifiedError& e) {
    fail(kExitFailed, "uncertified", e.what());
  } catch (const InvariantViolation& e) {
    fail(kExitInternal, "invariant_violation", e.what());
  }
  return r;
}

int run_and_emit(const std::string& cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const RunResult r = run(cmd, cfg);
  const std::string body = cfg.format == "text" ? render_text(r.report) : r.report.dump(2) + "\n";
  out << body;
  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
      err << "folidx: cannot create '" << cfg.out_dir << "': " << ec.message() << '\n';
      return kExitInput;
    }
    const std::filesystem::path dir(cfg.out_dir);
    std::ofstream(dir / (cfg.format == "text" ? "report.txt" : "report.json"), std::ios::binary) << body;
    for (const auto& [name, text] : r.side_files) std::ofstream(dir / name, std::ios::binary) << text;
  }
  if (r.exit_code != kExitOk && r.report.contains("cause"))
    err << "folidx: " << cmd << ": " << r.report["cause"].get<std::string>() << '\n';
  return r.exit_code;
}

}  // namespace folidx
