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

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "folidx/chernform.hpp"
#include "folidx/deform.hpp"
#include "folidx/galerkin.hpp"

namespace folidx {

using json = nlohmann::ordered_json;

inline constexpr const char* kDiffOpFormat = "folidx.diffop/1";

/// {"k": [...], "re": [[...]], "im": [[...]]} per frequency.
json to_json(const TrigPoly& a);
TrigPoly trigpoly_from_json(const json& j, int dim);

/// {"format": "folidx.diffop/1", "split": [p, q], "rank_in", "rank_out",
///  "monomials": [{"alpha": [...], "coefficient": [<TrigPoly terms>]}]}
json to_json(const DiffOp& P);
DiffOp diffop_from_json(const json& j);

json to_json(const HomogeneityReport& r);
json to_json(const InvertibilityCertificate& c);
json to_json(const DecayReport& d);
json to_json(const IndexReport& r);
json to_json(const ChernResult& r);
json to_json(const ShearReport& r);
json to_json(const ProbeReport& r);
json to_json(const LawReport& r);
json to_json(const HomotopyTrace& h);
json to_json(const ChernConvention& c);

/// Binary ProjField dump, host byte order (little-endian on supported hosts):
///   char[8] "FOLIDXPF", uint32 version = 1,
///   int32 p, q, m, base_nodes, uint64 base_count, uint64 fiber_count,
///   float64 base_points[base_count][n], float64 fiber_points[fiber_count][n] (xi then eta),
///   float64 values[base_count][fiber_count][2m][2m][2]  (row-major matrix, re/im pairs).
void write_projfield(std::ostream& os, const ProjField& f);
ProjField read_projfield(std::istream& is);

void write_sweep_csv(std::ostream& os, const IndexReport& r);
void write_probe_csv(std::ostream& os, const ProbeReport& r);
void write_chern_table_csv(std::ostream& os, const ChernResult& r);

/// Indented "key: value" rendering used by --format text.
std::string render_text(const json& j);

}  // namespace folidx
