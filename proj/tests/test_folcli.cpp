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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "folidx/catalog.hpp"
#include "folidx/config.hpp"
#include "folidx/errors.hpp"
#include "folidx/parser.hpp"
#include "folidx/pipeline.hpp"
#include "folidx/serialize.hpp"
#include "support.hpp"

using namespace folidx;

namespace {
const FoliationSplit s11{1, 1}, s20{2, 0};
}

TEST_CASE("parse the heat operator") {
  const DiffOp P = parse_operator("-D[x1]^2 + D[y1]", s11);
  CHECK(P == catalog::heat());
  CHECK(P.monomials().size() == 2);
  CHECK(P.coefficient(MultiIndex({2, 0})).coefficient({0, 0})(0, 0) == cplx(-1.0));
  CHECK(P.coefficient(MultiIndex({0, 1})).coefficient({0, 0})(0, 0) == cplx(1.0));
}

TEST_CASE("parse the winding operator") {
  const DiffOp P = parse_operator("exp(i*1*x1)*(D[x1] + i*D[x2])", s20);
  CHECK(P == catalog::winding_operator(1, 0.0));
  CHECK(parse_operator("exp(i*x1)*(D[x1] + i*D[x2]) + 0.25", s20) == catalog::winding_operator(1, 0.25));
}

TEST_CASE("parse matrix and trigonometric coefficients") {
  const char* src =
      "D[x1] + i*(sin(x1)*[[0,1],[1,0]] + sin(x2)*[[0,-i],[i,0]] + (1 - cos(x1) - cos(x2))*[[1,0],[0,-1]])*D[x2]";
  CHECK(max_coefficient_difference(parse_operator(src, s20), catalog::coupled_calibration()) < 1e-16);
}

TEST_CASE("products lower through the Leibniz rule") {
  const DiffOp lhs = parse_operator("D[x1]*exp(i*x1)", s11);
  const DiffOp dx = DiffOp::derivative(s11, MultiIndex({1, 0}));
  const DiffOp e = DiffOp::multiplication(s11, TrigPoly::exponential({1, 0}, CMatrix::Constant(1, 1, 1.0)));
  CHECK(lhs == compose(dx, e));
  CHECK(parse_operator("(D[x1] + D[y1])^2", s11) == compose(add(dx, DiffOp::derivative(s11, MultiIndex({0, 1}))),
                                                          add(dx, DiffOp::derivative(s11, MultiIndex({0, 1})))));
}

TEST_CASE("parser diagnostics") {
  auto where = [](const char* s, FoliationSplit sp) -> std::pair<int, int> {
    try {
      parse_operator(s, sp);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(where("D[x3]", s20) == std::pair{1, 3});
  CHECK(where("D[x1] +\n  * D[y1]", s11) == std::pair{2, 3});
  CHECK(where("foo", s11) == std::pair{1, 1});
  CHECK(where("D[x1]^x", s11) == std::pair{1, 7});
  CHECK(where("exp(x1)", s11).first == 1);
  CHECK(where("exp(i*0.5*x1)", s11).first == 1);
  CHECK(where("[[1,2],[3]]", s11).first == 1);
  CHECK(where("[[1,0],[0,1]] + [[1,0,0],[0,1,0],[0,0,1]]", s11).first == 1);
  CHECK(where("x1*D[x1]", s11).first == 1);
  CHECK(where("(D[x1]", s11).first == 1);
}

TEST_CASE("print/parse round trip") {
  std::mt19937_64 rng(8);
  std::vector<DiffOp> corpus{catalog::heat(), catalog::coupled_calibration(), catalog::winding_operator(2, 0.1),
                             catalog::random_weighted_elliptic(4, {.rank = 2}), catalog::mixed_laplacian(s20),
                             folidx::testing::random_op(rng, s11, 2, 3, 2, 1), DiffOp(s11, 2, 2)};
  for (const DiffOp& P : corpus) {
    const std::string text = print(P);
    const DiffOp Q = parse_operator(text, P.split());
    CHECK_MESSAGE(Q == P, text);
    CHECK(print(Q) == text);
  }
}

TEST_CASE("diffop JSON round trip and validation") {
  const DiffOp P = catalog::random_weighted_elliptic(5, {.rank = 2});
  const json j = to_json(P);
  CHECK(j["format"] == kDiffOpFormat);
  CHECK(diffop_from_json(json::parse(j.dump())) == P);
  json bad = j;
  bad["format"] = "other/1";
  CHECK_THROWS_AS(diffop_from_json(bad), InputError);
  bad = j;
  bad["rank_in"] = 3;
  CHECK_THROWS_AS(diffop_from_json(bad), InputError);
  CHECK_THROWS_AS(diffop_from_json(json::object()), InputError);
}

TEST_CASE("projfield binary round trip") {
  const WeightedSymbol s = principal_symbol(catalog::heat());
  ProjFieldGrid g;
  g.base_nodes = 3;
  g.fiber_points = weighted_sphere_grid(s11, 4);
  const ProjField f = symbol_projection_field(s, g, check_invertibility(s));
  std::stringstream ss;
  write_projfield(ss, f);
  const ProjField r = read_projfield(ss);
  CHECK(r.m == f.m);
  CHECK(r.base_points == f.base_points);
  REQUIRE(r.values.size() == f.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(r.values[i] == f.values[i]);
  std::stringstream junk("NOTAFIELD");
  CHECK_THROWS_AS(read_projfield(junk), InputError);
}

TEST_CASE("config parsing and validation") {
  const json j = json::parse(R"({"split": [2, 0], "operator": {"expr": "D[x1] + i*D[x2]"},
    "cutoffs": [4, 6, 8], "rule": "gap", "seed": 3, "chern": {"radii": [3, 5]},
    "tolerances": {"invertibility": 1e-5}})");
  const RunConfig c = config_from_json(j);
  CHECK(c.split == s20);
  CHECK(c.cutoffs == std::vector<int>{4, 6, 8});
  CHECK(c.index.rule == ThresholdRule::Gap);
  CHECK(c.seed == 3u);
  CHECK(c.chern.radii == std::vector<double>{3, 5});
  CHECK(c.index.plan.tolerance == 1e-5);
  CHECK(config_from_json(json::parse(to_json(c).dump())).cutoffs == c.cutoffs);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"tolerances": {"integer": -1}})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"format": "xml"})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sign_convention": {"sign": 1}})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"cutoffs": "many"})")), InputError);
}

TEST_CASE("pipeline exit codes") {
  RunConfig c;
  c.expr = "-D[x1]^2";
  RunResult r = run("check", c);
  CHECK(r.exit_code == kExitFailed);
  CHECK(r.report["certificate"]["passed"] == false);
  CHECK(std::abs(r.report["certificate"]["witness_fiber"]["xi"][0].get<double>()) < 1e-12);
  CHECK(std::abs(std::abs(r.report["certificate"]["witness_fiber"]["eta"][0].get<double>()) - 1.0) < 1e-12);

  c.expr = "-D[x1]^2 + D[y1]";
  CHECK(run("check", c).exit_code == kExitOk);
  CHECK(run("symbol", c).exit_code == kExitInput);  // no seed
  c.seed = 1;
  r = run("symbol", c);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["weighted_degree"] == 2);
  CHECK(run("frobnicate", c).exit_code == kExitInput);
  c.expr = "D[x1] +";
  r = run("check", c);
  CHECK(r.exit_code == kExitInput);
  CHECK(r.report["cause"] == "parse_error");
  c.expr = "-D[x1]^2";
  CHECK(run("index-analytic", c).report["cause"] == "uncertified");
}

TEST_CASE("index-analytic reports are byte-reproducible") {
  RunConfig c;
  c.expr = "-D[x1]^2 + D[y1]";
  c.cutoffs = {3, 4, 5};
  const RunResult a = run("index-analytic", c), b = run("index-analytic", c);
  CHECK(a.exit_code == kExitOk);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.report["analytic"]["index"] == 0);
  CHECK(a.report["version"] == FOLIDX_VERSION);
  CHECK(a.report["sign_convention"]["sign"] == -1.0);
}

TEST_CASE("estimates and deform subcommands") {
  RunConfig c;
  c.expr = "-D[x1]^2 + D[y1]";
  c.seed = 2;
  c.probe_cutoffs = {2, 3};
  c.probe_trials = 2;
  const RunResult e = run("estimates", c);
  CHECK(e.exit_code == kExitOk);
  CHECK(e.report["estimates"]["sweep"].size() == 2);
  c.homotopy_K = 6;
  c.base_point = {0.1, 0.2};
  const RunResult d = run("deform", c);
  CHECK(d.exit_code == kExitOk);
  CHECK(d.report["homotopy"]["trace_consistent"] == true);
  CHECK(d.report["coordinate_law"].size() == 6);
}

TEST_CASE("operator files and the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "folidx_test_out";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto opfile = dir / "heat.json";
  std::ofstream(opfile) << to_json(catalog::heat()).dump();
  RunConfig c;
  c.operator_file = opfile.string();
  c.cutoffs = {3, 4, 5};
  c.out_dir = (dir / "run").string();
  std::ostringstream out, err;
  CHECK(run_and_emit("index-analytic", c, out, err) == kExitOk);
  CHECK(std::filesystem::exists(dir / "run" / "report.json"));
  CHECK(std::filesystem::exists(dir / "run" / "sweep.csv"));
  c.format = "text";
  out.str("");
  CHECK(run_and_emit("index-analytic", c, out, err) == kExitOk);
  CHECK(out.str().find("index: 0") != std::string::npos);
  std::filesystem::remove_all(dir);
}
