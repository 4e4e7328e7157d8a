#include "confhess/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace confhess {

namespace {

enum class Op { constant, variable, add, sub, mul, div, neg, fmin, fmax, fpow, fabs_, fsqrt, fexp, flog };

}  // namespace

struct Expr::Node {
  Op op;
  double value = 0.0;  // constant
  int var = -1;        // variable index
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
  const std::string& s;
  const std::vector<std::string>& vars;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("expression parse error at offset " + std::to_string(pos) + ": " + what);
  }

  NodePtr make(Op op, std::vector<NodePtr> kids) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip();
      if (eat('+'))
        lhs = make(Op::add, {lhs, term()});
      else if (eat('-'))
        lhs = make(Op::sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip();
      if (eat('*'))
        lhs = make(Op::mul, {lhs, factor()});
      else if (eat('/'))
        lhs = make(Op::div, {lhs, factor()});
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip();
    if (eat('-')) return make(Op::neg, {factor()});
    if (eat('+')) return factor();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    size_t start = pos;
    char* end = nullptr;
    double v = std::strtod(s.c_str() + start, &end);
    if (end == s.c_str() + start) fail("bad number");
    pos = static_cast<size_t>(end - s.c_str());
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::constant;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);
    skip();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      std::vector<NodePtr> args;
      if (!eat(')')) {
        args.push_back(expr());
        while (eat(',')) args.push_back(expr());
        if (!eat(')')) fail("expected ')' after arguments");
      }
      return function(name, std::move(args));
    }
    for (size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == name) {
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::variable;
        n->var = static_cast<int>(i);
        return n;
      }
    }
    fail("unknown identifier '" + name + "'");
  }

  NodePtr function(const std::string& name, std::vector<NodePtr> args) {
    auto need = [&](size_t k) {
      if (args.size() != k) fail("function " + name + " expects " + std::to_string(k) + " arguments");
    };
    if (name == "min" || name == "max") {
      if (args.size() < 2) fail("function " + name + " expects at least 2 arguments");
      return make(name == "min" ? Op::fmin : Op::fmax, std::move(args));
    }
    if (name == "pow") {
      need(2);
      return make(Op::fpow, std::move(args));
    }
    if (name == "abs") {
      need(1);
      return make(Op::fabs_, std::move(args));
    }
    if (name == "sqrt") {
      need(1);
      return make(Op::fsqrt, std::move(args));
    }
    if (name == "exp") {
      need(1);
      return make(Op::fexp, std::move(args));
    }
    if (name == "log") {
      need(1);
      return make(Op::flog, std::move(args));
    }
    fail("unknown function '" + name + "'");
  }
};

double eval_node(const Expr::Node& n, const Vec& vars) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      if (n.var < 0 || static_cast<size_t>(n.var) >= vars.size())
        throw InputError("expression evaluated with too few variables");
      return vars[static_cast<size_t>(n.var)];
    case Op::add:
      return eval_node(*n.kids[0], vars) + eval_node(*n.kids[1], vars);
    case Op::sub:
      return eval_node(*n.kids[0], vars) - eval_node(*n.kids[1], vars);
    case Op::mul:
      return eval_node(*n.kids[0], vars) * eval_node(*n.kids[1], vars);
    case Op::div:
      return eval_node(*n.kids[0], vars) / eval_node(*n.kids[1], vars);
    case Op::neg:
      return -eval_node(*n.kids[0], vars);
    case Op::fmin: {
      double m = eval_node(*n.kids[0], vars);
      for (size_t i = 1; i < n.kids.size(); ++i) m = std::min(m, eval_node(*n.kids[i], vars));
      return m;
    }
    case Op::fmax: {
      double m = eval_node(*n.kids[0], vars);
      for (size_t i = 1; i < n.kids.size(); ++i) m = std::max(m, eval_node(*n.kids[i], vars));
      return m;
    }
    case Op::fpow:
      return std::pow(eval_node(*n.kids[0], vars), eval_node(*n.kids[1], vars));
    case Op::fabs_:
      return std::fabs(eval_node(*n.kids[0], vars));
    case Op::fsqrt:
      return std::sqrt(eval_node(*n.kids[0], vars));
    case Op::fexp:
      return std::exp(eval_node(*n.kids[0], vars));
    case Op::flog:
      return std::log(eval_node(*n.kids[0], vars));
  }
  throw InputError("expression: corrupt node");
}

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
  Parser p{text, variables};
  NodePtr root = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  Expr e;
  e.root_ = root;
  e.text_ = text;
  return e;
}

double Expr::eval(const Vec& vars) const {
  if (!root_) throw InputError("empty expression");
  return eval_node(*root_, vars);
}

}  // namespace confhess
