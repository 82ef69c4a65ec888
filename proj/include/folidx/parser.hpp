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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "folidx/errors.hpp"
#include "folidx/opcalc.hpp"

namespace folidx {

/// Syntax or semantic error with a 1-based source location.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Operator expression tree. Grammar (loosest first):
///   sum     := product (('+' | '-') product)*
///   product := unary ('*' unary)*
///   unary   := '-' unary | power
///   power   := atom ('^' integer)?
///   atom    := number | 'i' | 'pi' | x<j> | y<j> | 'D[' x<j> | y<j> ']'
///            | ('exp' | 'sin' | 'cos') '(' sum ')' | '(' sum ')'
///            | '[' '[' sum (',' sum)* ']' (',' '[' ... ']')* ']'
struct OpExpr {
  enum class Kind { Number, Coordinate, Derivative, Function, Matrix, Negate, Add, Subtract, Multiply, Power };
  Kind kind = Kind::Number;
  cplx number;                 ///< Number
  int axis = 0;                ///< Coordinate / Derivative: 0-based torus axis
  int exponent = 0;            ///< Power
  std::string name;            ///< Function name, identifier spelling
  std::vector<std::shared_ptr<const OpExpr>> args;
  std::vector<int> row_sizes;  ///< Matrix: entries are args in row-major order
  int line = 1;
  int column = 1;
};

using OpExprPtr = std::shared_ptr<const OpExpr>;

/// Parses and checks coordinate names against the split (x1..xp, y1..yq).
OpExprPtr parse(std::string_view text, const FoliationSplit& split);

/// Standard-form operator via compose/add; scalar parts broadcast against matrix parts.
DiffOp lower(const OpExpr& e, const FoliationSplit& split);

inline DiffOp parse_operator(std::string_view text, const FoliationSplit& split) {
  return lower(*parse(text, split), split);
}

/// Canonical expression that parses back to an equal operator (%.17g literals).
std::string print(const DiffOp& P);
std::string print(const OpExpr& e, const FoliationSplit& split);

}  // namespace folidx
