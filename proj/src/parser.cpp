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

#include "folidx/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>

namespace folidx {

ParseError::ParseError(const std::string& what, int line, int column)
    : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum class Type { Number, Ident, Symbol, End } type = Type::End;
  std::string text;
  double value = 0.0;
  int line = 1, column = 1;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      t.type = Token::Type::Number;
      t.text = std::string(s.substr(i, j - i));
      try {
        std::size_t used = 0;
        t.value = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + t.text + "'", line, col);
      }
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.type = Token::Type::Ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("+-*^()[],").find(c) != std::string_view::npos) {
      t.type = Token::Type::Symbol;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const FoliationSplit& split) : t_(std::move(toks)), split_(split) {}

  OpExprPtr parse_all() {
    auto e = sum();
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  std::vector<Token> t_;
  std::size_t pos_ = 0;
  FoliationSplit split_;

  const Token& peek() const { return t_[pos_]; }
  const Token& take() { return t_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  bool is(const char* sym) const { return peek().type == Token::Type::Symbol && peek().text == sym; }
  void expect(const char* sym) {
    if (!is(sym)) fail(std::string("expected '") + sym + "'" + (peek().type == Token::Type::End ? " before end of input" : ", found '" + peek().text + "'"));
    take();
  }

  static std::shared_ptr<OpExpr> node(OpExpr::Kind k, const Token& at) {
    auto n = std::make_shared<OpExpr>();
    n->kind = k;
    n->line = at.line;
    n->column = at.column;
    return n;
  }

  OpExprPtr sum() {
    auto lhs = product();
    while (is("+") || is("-")) {
      const Token& op = take();
      auto n = node(op.text == "+" ? OpExpr::Kind::Add : OpExpr::Kind::Subtract, op);
      n->args = {lhs, product()};
      lhs = n;
    }
    return lhs;
  }

  OpExprPtr product() {
    auto lhs = unary();
    while (is("*")) {
      const Token& op = take();
      auto n = node(OpExpr::Kind::Multiply, op);
      n->args = {lhs, unary()};
      lhs = n;
    }
    return lhs;
  }

  OpExprPtr unary() {
    if (is("-")) {
      const Token& op = take();
      auto n = node(OpExpr::Kind::Negate, op);
      n->args = {unary()};
      return n;
    }
    return power();
  }

  OpExprPtr power() {
    auto base = atom();
    if (is("^")) {
      const Token& op = take();
      if (peek().type != Token::Type::Number) fail("expected a nonnegative integer exponent");
      const Token& e = take();
      if (e.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("exponent must be a nonnegative integer", e.line, e.column);
      auto n = node(OpExpr::Kind::Power, op);
      n->exponent = std::stoi(e.text);
      n->args = {base};
      return n;
    }
    return base;
  }

  // x<j> / y<j> -> torus axis, with range checks against the split
  int coordinate_axis(const Token& tok) const {
    const std::string& s = tok.text;
    if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'y') &&
        s.find_first_not_of("0123456789", 1) == std::string::npos && s[1] != '0') {
      const int j = std::stoi(s.substr(1));
      const int limit = s[0] == 'x' ? split_.p : split_.q;
      if (j > limit)
        throw ParseError("coordinate '" + s + "' out of range for split (" + std::to_string(split_.p) +
                             "," + std::to_string(split_.q) + ")",
                         tok.line, tok.column);
      return s[0] == 'x' ? j - 1 : split_.p + j - 1;
    }
    return -1;
  }

  OpExprPtr atom() {
    const Token& tok = peek();
    if (tok.type == Token::Type::Number) {
      take();
      auto n = node(OpExpr::Kind::Number, tok);
      n->number = tok.value;
      n->name = tok.text;
      return n;
    }
    if (is("(")) {
      take();
      auto e = sum();
      expect(")");
      return e;
    }
    if (is("[")) return matrix();
    if (tok.type != Token::Type::Ident) fail(tok.type == Token::Type::End ? "unexpected end of input" : "unexpected '" + tok.text + "'");
    take();
    if (tok.text == "i" || tok.text == "pi") {
      auto n = node(OpExpr::Kind::Number, tok);
      n->number = tok.text == "i" ? cplx(0.0, 1.0) : cplx(std::numbers::pi, 0.0);
      n->name = tok.text;
      return n;
    }
    if (tok.text == "D") {
      expect("[");
      const Token& v = peek();
      if (v.type != Token::Type::Ident) fail("expected a coordinate inside D[...]");
      take();
      const int axis = coordinate_axis(v);
      if (axis < 0) throw ParseError("unknown coordinate '" + v.text + "'", v.line, v.column);
      expect("]");
      auto n = node(OpExpr::Kind::Derivative, tok);
      n->axis = axis;
      n->name = v.text;
      return n;
    }
    if (tok.text == "exp" || tok.text == "sin" || tok.text == "cos") {
      expect("(");
      auto n = node(OpExpr::Kind::Function, tok);
      n->name = tok.text;
      n->args = {sum()};
      expect(")");
      return n;
    }
    const int axis = coordinate_axis(tok);
    if (axis >= 0) {
      auto n = node(OpExpr::Kind::Coordinate, tok);
      n->axis = axis;
      n->name = tok.text;
      return n;
    }
    throw ParseError("unknown identifier '" + tok.text + "'", tok.line, tok.column);
  }

  OpExprPtr matrix() {
    auto n = node(OpExpr::Kind::Matrix, peek());
    expect("[");
    std::vector<OpExprPtr> entries;
    do {
      expect("[");
      int count = 0;
      do {
        entries.push_back(sum());
        ++count;
      } while (is(",") && (take(), true));
      expect("]");
      n->row_sizes.push_back(count);
    } while (is(",") && (take(), true));
    expect("]");
    for (int r : n->row_sizes)
      if (r != n->row_sizes.front())
        throw ParseError("matrix literal rows have different lengths", n->line, n->column);
    n->args = std::move(entries);
    return n;
  }
};

// Affine form c + sum_j a_j x_j, for function arguments.
struct Affine {
  cplx c;
  std::vector<cplx> a;
  bool constant() const {
    for (const auto& v : a)
      if (v != cplx(0.0)) return false;
    return true;
  }
};

Affine affine(const OpExpr& e, int n) {
  auto err = [&](const std::string& m) -> ParseError { return ParseError(m, e.line, e.column); };
  switch (e.kind) {
    case OpExpr::Kind::Number: return {e.number, std::vector<cplx>(n)};
    case OpExpr::Kind::Coordinate: {
      Affine r{0.0, std::vector<cplx>(n)};
      r.a[e.axis] = 1.0;
      return r;
    }
    case OpExpr::Kind::Negate: {
      Affine r = affine(*e.args[0], n);
      r.c = -r.c;
      for (auto& v : r.a) v = -v;
      return r;
    }
    case OpExpr::Kind::Add:
    case OpExpr::Kind::Subtract: {
      Affine l = affine(*e.args[0], n), r = affine(*e.args[1], n);
      const double s = e.kind == OpExpr::Kind::Add ? 1.0 : -1.0;
      l.c += s * r.c;
      for (int j = 0; j < n; ++j) l.a[j] += s * r.a[j];
      return l;
    }
    case OpExpr::Kind::Multiply: {
      Affine l = affine(*e.args[0], n), r = affine(*e.args[1], n);
      if (!l.constant() && !r.constant()) throw err("function arguments must be affine in the coordinates");
      if (!l.constant()) std::swap(l, r);
      for (auto& v : r.a) v *= l.c;
      r.c *= l.c;
      return r;
    }
    case OpExpr::Kind::Function: {
      Affine r = affine(*e.args[0], n);
      if (!r.constant()) throw err("nested non-constant function inside an argument");
      if (e.name == "exp") r.c = std::exp(r.c);
      else if (e.name == "sin") r.c = std::sin(r.c);
      else r.c = std::cos(r.c);
      return r;
    }
    case OpExpr::Kind::Power: {
      Affine r = affine(*e.args[0], n);
      if (!r.constant()) throw err("powers of coordinates are not trigonometric polynomials");
      r.c = std::pow(r.c, e.exponent);
      return r;
    }
    default: throw err("derivatives and matrices are not allowed inside function arguments");
  }
}

Frequency integer_frequency(const std::vector<cplx>& a, bool imaginary, const OpExpr& at) {
  Frequency k(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double v = imaginary ? a[j].imag() : a[j].real();
    const double other = imaginary ? a[j].real() : a[j].imag();
    if (other != 0.0 || v != std::round(v))
      throw ParseError(imaginary ? "exp argument must be i times an integer combination of coordinates"
                                 : "sin/cos argument must be an integer combination of coordinates",
                       at.line, at.column);
    k[j] = static_cast<int>(v);
  }
  return k;
}

DiffOp scalar_op(const FoliationSplit& split, const TrigPoly& a) { return DiffOp::multiplication(split, a); }

DiffOp broadcast(const DiffOp& P, int m) {
  DiffOp out(P.split(), m, m);
  for (const auto& [alpha, a] : P.monomials()) out.add_monomial(alpha, a.broadcast(m));
  return out;
}

bool is_scalar(const DiffOp& P) { return P.rank_in() == 1 && P.rank_out() == 1; }

void harmonize(DiffOp& a, DiffOp& b, bool for_sum, const OpExpr& at) {
  if (for_sum) {
    if (a.rank_in() == b.rank_in() && a.rank_out() == b.rank_out()) return;
    if (is_scalar(a) && b.rank_in() == b.rank_out()) {
      a = broadcast(a, b.rank_in());
      return;
    }
    if (is_scalar(b) && a.rank_in() == a.rank_out()) {
      b = broadcast(b, a.rank_in());
      return;
    }
  } else {
    if (a.rank_in() == b.rank_out()) return;
    // a scalar factor acts as a multiple of the identity on its neighbour
    if (is_scalar(a)) {
      a = broadcast(a, b.rank_out());
      return;
    }
    if (is_scalar(b)) {
      b = broadcast(b, a.rank_in());
      return;
    }
  }
  throw ParseError("rank mismatch: " + std::to_string(a.rank_out()) + "x" + std::to_string(a.rank_in()) +
                       " against " + std::to_string(b.rank_out()) + "x" + std::to_string(b.rank_in()),
                   at.line, at.column);
}

DiffOp lower_node(const OpExpr& e, const FoliationSplit& split) {
  const int n = split.n();
  switch (e.kind) {
    case OpExpr::Kind::Number: return scalar_op(split, TrigPoly::scalar(n, e.number));
    case OpExpr::Kind::Coordinate:
      throw ParseError("coordinate '" + e.name + "' may only appear inside exp, sin or cos", e.line, e.column);
    case OpExpr::Kind::Derivative: return DiffOp::derivative(split, MultiIndex::unit(n, e.axis));
    case OpExpr::Kind::Function: {
      const Affine arg = affine(*e.args[0], n);
      const CMatrix one = CMatrix::Constant(1, 1, 1.0);
      if (e.name == "exp") {
        const Frequency k = integer_frequency(arg.a, true, e);
        return scalar_op(split, TrigPoly::exponential(k, one * std::exp(arg.c)));
      }
      const Frequency k = integer_frequency(arg.a, false, e);
      Frequency mk(k);
      for (int& v : mk) v = -v;
      const cplx ep = std::exp(cplx(0.0, 1.0) * arg.c), em = std::exp(cplx(0.0, -1.0) * arg.c);
      TrigPoly t(n, 1, 1);
      if (e.name == "sin") {
        t.add_term(k, one * (ep / cplx(0.0, 2.0)));
        t.add_term(mk, one * (-em / cplx(0.0, 2.0)));
      } else {
        t.add_term(k, one * (ep / 2.0));
        t.add_term(mk, one * (em / 2.0));
      }
      return scalar_op(split, t);
    }
    case OpExpr::Kind::Matrix: {
      const int rows = static_cast<int>(e.row_sizes.size()), cols = e.row_sizes.front();
      TrigPoly M(n, rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          const OpExpr& entry = *e.args[static_cast<std::size_t>(r * cols + c)];
          const DiffOp v = lower_node(entry, split);
          if (!is_scalar(v)) throw ParseError("matrix entries must be scalar", entry.line, entry.column);
          for (const auto& [alpha, a] : v.monomials()) {
            if (alpha.degree() != 0)
              throw ParseError("matrix entries must not contain derivatives", entry.line, entry.column);
            for (const auto& [k, c0] : a.terms()) {
              CMatrix unit = CMatrix::Zero(rows, cols);
              unit(r, c) = c0(0, 0);
              M.add_term(k, unit);
            }
          }
        }
      DiffOp out(split, cols, rows);
      out.add_monomial(MultiIndex::zero(n), M);
      return out;
    }
    case OpExpr::Kind::Negate: return scale(-1.0, lower_node(*e.args[0], split));
    case OpExpr::Kind::Add:
    case OpExpr::Kind::Subtract: {
      DiffOp a = lower_node(*e.args[0], split), b = lower_node(*e.args[1], split);
      harmonize(a, b, true, e);
      return e.kind == OpExpr::Kind::Add ? add(a, b) : subtract(a, b);
    }
    case OpExpr::Kind::Multiply: {
      DiffOp a = lower_node(*e.args[0], split), b = lower_node(*e.args[1], split);
      harmonize(a, b, false, e);
      return compose(a, b);
    }
    case OpExpr::Kind::Power: {
      const DiffOp base = lower_node(*e.args[0], split);
      if (base.rank_in() != base.rank_out())
        throw ParseError("power of a non-square operator", e.line, e.column);
      DiffOp out = DiffOp::identity(split, base.rank_in());
      for (int r = 0; r < e.exponent; ++r) out = compose(out, base);
      return out;
    }
  }
  throw ParseError("unsupported expression", e.line, e.column);
}

std::string real_literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of("0123456789") == std::string::npos) throw InputError("print: non-finite coefficient");
  return s;
}

// Parenthesized complex literal, e.g. (1.5-2*i).
std::string complex_literal(cplx c) {
  std::string s = "(" + real_literal(c.real());
  if (c.imag() != 0.0) {
    const std::string im = real_literal(std::abs(c.imag()));
    s += (std::signbit(c.imag()) ? "-" : "+") + im + "*i";
  }
  return s + ")";
}

std::string coordinate_name(int axis, const FoliationSplit& split) {
  return axis < split.p ? "x" + std::to_string(axis + 1) : "y" + std::to_string(axis - split.p + 1);
}

std::string exp_factor(const Frequency& k, const FoliationSplit& split) {
  std::string lin;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    if (!lin.empty()) lin += "+";
    lin += "(" + std::to_string(k[j]) + ")*" + coordinate_name(static_cast<int>(j), split);
  }
  return lin.empty() ? std::string() : "*exp(i*(" + lin + "))";
}

std::string scalar_poly(const TrigPoly& a, int r, int c, const FoliationSplit& split) {
  std::string s;
  for (const auto& [k, m] : a.terms()) {
    if (m(r, c) == cplx(0.0)) continue;
    if (!s.empty()) s += " + ";
    s += complex_literal(m(r, c)) + exp_factor(k, split);
  }
  return s.empty() ? "0" : s;
}

std::string coefficient(const TrigPoly& a, const FoliationSplit& split) {
  if (a.rows() == 1 && a.cols() == 1) {
    const std::string s = scalar_poly(a, 0, 0, split);
    return a.terms().size() == 1 && s.find('*') == std::string::npos ? s : "(" + s + ")";
  }
  std::string s = "[";
  for (int r = 0; r < a.rows(); ++r) {
    s += r ? ", [" : "[";
    for (int c = 0; c < a.cols(); ++c) s += (c ? ", " : "") + scalar_poly(a, r, c, split);
    s += "]";
  }
  return s + "]";
}

}  // namespace

OpExprPtr parse(std::string_view text, const FoliationSplit& split) {
  split.validate();
  return Parser(tokenize(text), split).parse_all();
}

DiffOp lower(const OpExpr& e, const FoliationSplit& split) {
  split.validate();
  return lower_node(e, split);
}

std::string print(const DiffOp& P) {
  if (P.is_zero()) {
    if (P.rank_in() == 1 && P.rank_out() == 1) return "0";
    return coefficient(TrigPoly(P.dim(), P.rank_out(), P.rank_in()), P.split());
  }
  std::string s;
  for (const auto& [alpha, a] : P.monomials()) {
    if (!s.empty()) s += " + ";
    s += coefficient(a, P.split());
    for (int j = 0; j < alpha.size(); ++j)
      if (alpha[j] > 0) {
        s += "*D[" + coordinate_name(j, P.split()) + "]";
        if (alpha[j] > 1) s += "^" + std::to_string(alpha[j]);
      }
  }
  return s;
}

std::string print(const OpExpr& e, const FoliationSplit& split) { return print(lower(e, split)); }

}  // namespace folidx
