#pragma once

#include <memory>
#include <string>
#include <vector>

#include "confhess/common.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// Small arithmetic expression over a fixed variable list. Used for
// user-supplied cone defining functions (variables lam1..lamn, evaluated on a
// descending-sorted list) and custom scalar fields (variables x1..xn).
//
// Grammar: + - * / with usual precedence, unary minus, parentheses, numeric
// literals, and the functions min, max (2+ args), pow(a,b), abs, sqrt, exp,
// log. Unknown identifiers are a parse error.
class Expr {
 public:
  // Throws InputError on any syntax or identifier problem.
  static Expr parse(const std::string& text, const std::vector<std::string>& variables);

  double eval(const Vec& vars) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace confhess
