#include <doctest.h>

#include <cmath>

#include "confhess/expr.hpp"

using namespace confhess;

TEST_CASE("arithmetic with precedence and unary minus") {
  Expr e = Expr::parse("1 + 2*3 - -4/2", {});
  CHECK(e.eval({}) == doctest::Approx(9.0));
  Expr f = Expr::parse("(1 + 2) * (3 - 5)", {});
  CHECK(f.eval({}) == doctest::Approx(-6.0));
}

TEST_CASE("variables bind by name") {
  Expr e = Expr::parse("lam1 + 0.5*lam2", {"lam1", "lam2", "lam3"});
  CHECK(e.eval({2.0, -1.0, 7.0}) == doctest::Approx(1.5));
}

TEST_CASE("functions") {
  Expr e = Expr::parse("min(x1, x2, x3) + max(x1, x2)", {"x1", "x2", "x3"});
  CHECK(e.eval({3.0, -2.0, 5.0}) == doctest::Approx(1.0));
  Expr p = Expr::parse("pow(x1, 3) + sqrt(abs(x2))", {"x1", "x2"});
  CHECK(p.eval({2.0, -9.0}) == doctest::Approx(11.0));
  Expr l = Expr::parse("log(exp(x1))", {"x1"});
  CHECK(l.eval({1.25}) == doctest::Approx(1.25));
}

TEST_CASE("parse errors are reported as input errors") {
  CHECK_THROWS_AS(Expr::parse("1 +", {}), InputError);
  CHECK_THROWS_AS(Expr::parse("foo + 1", {"x1"}), InputError);
  CHECK_THROWS_AS(Expr::parse("min(x1)", {"x1"}), InputError);
  CHECK_THROWS_AS(Expr::parse("pow(x1)", {"x1"}), InputError);
  CHECK_THROWS_AS(Expr::parse("1 2", {}), InputError);
  CHECK_THROWS_AS(Expr::parse("(1", {}), InputError);
}
