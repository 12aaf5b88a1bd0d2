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

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sclab/chart.hpp"

namespace scl {

/// Arithmetic over chart coordinates x1..x3:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | 'pi' | 'e' | 'x1' | 'x2' | 'x3'
///            | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | log | sqrt
///
/// Parse errors carry the 1-based column of the offending token.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text);
  static Expression constant(double v);

  double operator()(const Point& x) const;
  /// Highest coordinate index referenced (0 when constant).
  int max_coordinate() const { return max_coord_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
  int max_coord_ = 0;
};

}  // namespace scl
