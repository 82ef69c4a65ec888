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

#include <stdexcept>
#include <string>

namespace folidx {

/// Malformed or incompatible arguments (rank mismatch, bad cutoff, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical invariant failed to hold; signals a construction bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical plan is too coarse for the requested accuracy.
class RefineGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage refused to run because a prerequisite certificate did not pass.
class UncertifiedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace folidx
