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
#include <vector>

#include "folidx/config.hpp"

namespace folidx {

/// Process exit codes of the pipelines.
enum ExitCode : int {
  kExitOk = 0,          ///< every requested certificate / agreement passed
  kExitFailed = 1,      ///< a certificate, stability or agreement check failed
  kExitInput = 2,       ///< malformed input, config or expression
  kExitRefine = 3,      ///< numerical resolution insufficient (refine grid / increase R)
  kExitInternal = 4,    ///< an internal invariant was violated
};

const std::vector<std::string>& subcommands();

struct RunResult {
  int exit_code = kExitOk;
  json report;
  /// (file name, contents) side files written next to the report when out_dir is set.
  std::vector<std::pair<std::string, std::string>> side_files;
};

/// Runs one subcommand. Never throws for input/numerical errors: they are
/// mapped to an exit code and a machine-readable "cause" in the report.
RunResult run(const std::string& cmd, const RunConfig& cfg);

/// run() and emit the report (stdout, plus files under cfg.out_dir).
int run_and_emit(const std::string& cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace folidx
