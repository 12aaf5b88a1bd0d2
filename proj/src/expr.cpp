// Copyright 2026 The sclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sclab/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "sclab/error.hpp"

namespace scl {

struct Expression::Node {
  enum class Kind { number, coord, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  int coord = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const Point& x) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::coord: return x[coord];
      case Kind::neg: return -lhs->eval(x);
      case Kind::add: return lhs->eval(x) + rhs->eval(x);
      case Kind::sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::div: return lhs->eval(x) / rhs->eval(x);
      case Kind::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::call: return fn(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

double f_sin(double v) { return std::sin(v); }
double f_cos(double v) { return std::cos(v); }
double f_exp(double v) { return std::exp(v); }
double f_log(double v) { return std::log(v); }
double f_sqrt(double v) { return std::sqrt(v); }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }
  int max_coord() const { return max_coord_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int max_coord_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::parse,
         "expression column " + std::to_string(pos_ + 1) + ": " + msg + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }
  static NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::add, lhs, term());
      else if (accept('-')) lhs = make(Kind::sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }
  NodePtr literal() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return number(v);
  }
  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    if (id == "pi") return number(std::numbers::pi);
    if (id == "e") return number(std::numbers::e);
    if (id == "x1" || id == "x2" || id == "x3") {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::coord;
      n->coord = id[1] - '1';
      max_coord_ = std::max(max_coord_, n->coord + 1);
      return n;
    }
    double (*fn)(double) = nullptr;
    if (id == "sin") fn = f_sin;
    else if (id == "cos") fn = f_cos;
    else if (id == "exp") fn = f_exp;
    else if (id == "log") fn = f_log;
    else if (id == "sqrt") fn = f_sqrt;
    if (!fn) {
      pos_ = start;
      error("unknown identifier '" + id + "'");
    }
    if (!accept('(')) error("expected '(' after " + id);
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::call;
    n->fn = fn;
    n->lhs = expr();
    if (!accept(')')) error("expected ')'");
    return n;
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.parse_all();
  e.text_ = text;
  e.max_coord_ = p.max_coord();
  return e;
}

Expression Expression::constant(double v) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->value = v;
  e.root_ = n;
  e.text_ = std::to_string(v);
  return e;
}

double Expression::operator()(const Point& x) const { return root_->eval(x); }

}  // namespace scl
