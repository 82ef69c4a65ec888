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

// folidx command-line driver: parses flags, merges them over an optional
// JSON config, and hands off to the pipeline runner.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "folidx/errors.hpp"
#include "folidx/pipeline.hpp"

namespace {

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !(is >> std::ws).eof())
      throw folidx::InputError(std::string("bad ") + what + " list '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw folidx::InputError(std::string("empty ") + what + " list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"folidx: weighted operator calculus and index verification on foliated tori"};
  app.set_version_flag("--version", FOLIDX_VERSION);

  std::string command, config, expr, operator_file, split, cutoffs, radii, out, format, probe, base_point;
  std::uint64_t seed = 0;
  app.add_option("command", command, "symbol | check | index-analytic | index-topological | verify | estimates | deform")
      ->required();
  app.add_option("--config", config, "JSON run configuration");
  app.add_option("--expr", expr, "operator expression, e.g. \"-D[x1]^2 + D[y1]\"");
  app.add_option("--operator-file", operator_file, "operator as DSL text or serialized JSON");
  app.add_option("--split", split, "foliation split p,q (default 1,1)");
  app.add_option("--cutoffs", cutoffs, "Galerkin cutoffs K1,K2,...");
  app.add_option("--fiber-radius", radii, "fiber radii for the Chern integral R1,R2,...");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized probes");
  app.add_option("--out", out, "directory for report and CSV side files");
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--probe", probe, "probe operator A for estimates (default D[y1])");
  app.add_option("--base-point", base_point, "base point for frozen coefficients x1,...");

  CLI11_PARSE(app, argc, argv);

  folidx::RunConfig cfg;
  try {
    if (!config.empty()) cfg = folidx::load_config(config);
    if (!split.empty()) {
      const auto pq = parse_list<int>(split, "split");
      if (pq.size() != 2) throw folidx::InputError("--split expects p,q");
      cfg.split = {pq[0], pq[1]};
    }
    if (!expr.empty()) {
      cfg.expr = expr;
      cfg.operator_file.clear();
    }
    if (!operator_file.empty()) {
      cfg.operator_file = operator_file;
      cfg.expr.clear();
    }
    if (!cutoffs.empty()) cfg.cutoffs = parse_list<int>(cutoffs, "cutoff");
    if (!radii.empty()) cfg.chern.radii = parse_list<double>(radii, "radius");
    if (*seed_opt) cfg.seed = seed;
    if (!out.empty()) cfg.out_dir = out;
    if (!format.empty()) cfg.format = format;
    if (!probe.empty()) cfg.probe_expr = probe;
    if (!base_point.empty()) cfg.base_point = parse_list<double>(base_point, "base point");
  } catch (const folidx::InputError& e) {
    std::cerr << "folidx: " << e.what() << '\n';
    return folidx::kExitInput;
  }
  return folidx::run_and_emit(command, cfg, std::cout, std::cerr);
}
