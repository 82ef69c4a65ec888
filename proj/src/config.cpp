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

#include "folidx/config.hpp"

#include <fstream>
#include <sstream>

#include "folidx/errors.hpp"
#include "folidx/parser.hpp"

namespace folidx {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void positive(double v, const char* what) {
  if (!(v > 0.0)) throw InputError(std::string("config: ") + what + " must be positive");
}

}  // namespace

void RunConfig::validate() const {
  split.validate();
  positive(index.relative_threshold, "relative_threshold");
  positive(index.gap_ceiling, "gap_ceiling");
  positive(index.separation_factor, "separation_factor");
  positive(index.plan.tolerance, "invertibility tolerance");
  positive(index.plan.stability, "invertibility stability");
  positive(homogeneity_tolerance, "homogeneity tolerance");
  positive(chern.integer_tolerance, "integer tolerance");
  positive(chern.tail_limit, "tail limit");
  positive(chern.smoothness_limit, "smoothness limit");
  positive(homotopy_t_max, "homotopy t_max");
  for (double R : chern.radii) positive(R, "fiber radius");
  for (int K : cutoffs)
    if (K < 1) throw InputError("config: cutoffs must be >= 1");
  for (int K : probe_cutoffs)
    if (K < 0) throw InputError("config: probe cutoffs must be >= 0");
  if (index.plan.angular < 2 || index.plan.base < 1) throw InputError("config: invertibility grid too small");
  if (format != "json" && format != "text") throw InputError("config: format must be json or text");
  if (!base_point.empty() && static_cast<int>(base_point.size()) != split.n())
    throw InputError("config: base point must have n coordinates");
  if (convention.sign != default_convention().sign || convention.c2 != default_convention().c2)
    throw InputError("config: sign convention differs from the calibrated one");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("split")) {
      const auto s = j.at("split").get<std::vector<int>>();
      if (s.size() != 2) throw InputError("config: split must be [p, q]");
      c.split = {s[0], s[1]};
    }
    if (j.contains("operator")) {
      const auto& op = j.at("operator");
      if (op.is_string()) c.expr = op.get<std::string>();
      else {
        read(op, "expr", c.expr);
        read(op, "file", c.operator_file);
      }
    }
    read(j, "cutoffs", c.cutoffs);
    if (j.contains("rule")) {
      const auto r = j.at("rule").get<std::string>();
      if (r == "relative") c.index.rule = ThresholdRule::Relative;
      else if (r == "gap") c.index.rule = ThresholdRule::Gap;
      else throw InputError("config: rule must be relative or gap");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      read(t, "invertibility", c.index.plan.tolerance);
      read(t, "relative_threshold", c.index.relative_threshold);
      read(t, "gap_ceiling", c.index.gap_ceiling);
      read(t, "separation_factor", c.index.separation_factor);
      read(t, "homogeneity", c.homogeneity_tolerance);
      read(t, "integer", c.chern.integer_tolerance);
      read(t, "tail", c.chern.tail_limit);
      read(t, "smoothness", c.chern.smoothness_limit);
    }
    if (j.contains("invertibility_grid")) {
      const auto& g = j.at("invertibility_grid");
      read(g, "angular", c.index.plan.angular);
      read(g, "base", c.index.plan.base);
      read(g, "max_refinements", c.index.plan.max_refinements);
      read(g, "stability", c.index.plan.stability);
    }
    c.chern.invertibility = c.index.plan;
    if (j.contains("chern")) {
      const auto& g = j.at("chern");
      read(g, "base_nodes", c.chern.base_nodes);
      read(g, "radii", c.chern.radii);
      read(g, "shears", c.shears);
    }
    if (j.contains("estimates")) {
      const auto& e = j.at("estimates");
      read(e, "probe", c.probe_expr);
      read(e, "trials", c.probe_trials);
      read(e, "cutoffs", c.probe_cutoffs);
    }
    if (j.contains("deform")) {
      const auto& d = j.at("deform");
      read(d, "K", c.homotopy_K);
      read(d, "t_max", c.homotopy_t_max);
      read(d, "law_steps", c.law_steps);
      read(d, "base_point", c.base_point);
    }
    read(j, "format", c.format);
    read(j, "out", c.out_dir);
    if (j.contains("sign_convention")) {
      const auto& s = j.at("sign_convention");
      read(s, "sign", c.convention.sign);
      read(s, "c2", c.convention.c2);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["split"] = {c.split.p, c.split.q};
  j["operator"] = {{"expr", c.expr}, {"file", c.operator_file}};
  j["cutoffs"] = c.cutoffs;
  j["rule"] = c.index.rule == ThresholdRule::Relative ? "relative" : "gap";
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["tolerances"] = {{"invertibility", c.index.plan.tolerance},
                     {"relative_threshold", c.index.relative_threshold},
                     {"gap_ceiling", c.index.gap_ceiling},
                     {"separation_factor", c.index.separation_factor},
                     {"homogeneity", c.homogeneity_tolerance},
                     {"integer", c.chern.integer_tolerance},
                     {"tail", c.chern.tail_limit},
                     {"smoothness", c.chern.smoothness_limit}};
  j["invertibility_grid"] = {{"angular", c.index.plan.angular},
                             {"base", c.index.plan.base},
                             {"max_refinements", c.index.plan.max_refinements},
                             {"stability", c.index.plan.stability}};
  j["chern"] = {{"base_nodes", c.chern.base_nodes}, {"radii", c.chern.radii}, {"shears", c.shears}};
  j["estimates"] = {{"probe", c.probe_expr}, {"trials", c.probe_trials}, {"cutoffs", c.probe_cutoffs}};
  j["deform"] = {{"K", c.homotopy_K}, {"t_max", c.homotopy_t_max}, {"law_steps", c.law_steps},
                 {"base_point", c.base_point}};
  j["format"] = c.format;
  j["out"] = c.out_dir;
  j["sign_convention"] = to_json(c.convention);
  return j;
}

RunConfig load_config(const std::string& path) {
  const std::string text = slurp(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

DiffOp load_operator(const RunConfig& c) {
  if (!c.expr.empty() && !c.operator_file.empty())
    throw InputError("give either an inline expression or an operator file, not both");
  if (!c.expr.empty()) return parse_operator(c.expr, c.split);
  if (c.operator_file.empty()) throw InputError("no operator given (--expr or operator file)");
  const std::string text = slurp(c.operator_file);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("operator file: " + std::string(e.what()));
    }
    DiffOp P = diffop_from_json(j);
    if (!(P.split() == c.split)) throw InputError("operator file split differs from the configured split");
    return P;
  }
  return parse_operator(text, c.split);
}

}  // namespace folidx
