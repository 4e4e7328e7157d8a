#include <doctest.h>

#include <cmath>

#include "confhess/hessian.hpp"
#include "test_util.hpp"

using namespace confhess;
using testutil::max_abs_diff;

namespace {

// Jet of a purely radial field from profile data (g, g', g'') at radius r,
// placed at the point r * direction.
Jet radial_jet(int n, double r, double g, double g1, double g2, const Vec& dir) {
  Jet j;
  j.point = r * dir;
  j.value = g;
  j.gradient = g1 * dir;
  Matrix P = outer(dir, dir);
  j.hessian = scaled(g2, P) + scaled(g1 / r, Matrix::identity(n) - P);
  return j;
}

Jet one_var_jet(int n, double t, double g, double g1, double g2) {
  Jet j;
  j.point.assign(n, 0.0);
  j.point[n - 1] = t;
  j.value = g;
  j.gradient.assign(n, 0.0);
  j.gradient[n - 1] = g1;
  j.hessian = Matrix(n, n);
  j.hessian.at(n - 1, n - 1) = g2;
  return j;
}

}  // namespace

TEST_CASE("constant field has zero conformal curvature") {
  auto v = make_constant(3, 2.0);
  Jet j = v->jet({0.5, -1.0, 0.2}, JetMethod::analytic);
  CHECK(norm_max(conformal_hessian(j)) == 0.0);
}

TEST_CASE("bubble curvature tensor is a constant multiple of the identity") {
  auto v = make_bubble(3, {1.0, 1.0, {0.0, 0.0, 0.0}});
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    Vec x = rng.uniform_vec(3, -2.0, 2.0);
    Matrix A = conformal_hessian(v->jet(x, JetMethod::analytic));
    Matrix expect = scaled(2.0, Matrix::identity(3));
    CHECK(max_abs_diff(A, expect) <= 1e-10);
  }
}

TEST_CASE("log field spectrum is proportional to (1,-1,...,-1)") {
  auto v = make_log_power(3, 1.0);
  Vec lam = eigenvalues_of_jet(v->jet({1.0, 0.0, 0.0}, JetMethod::analytic));
  CHECK(lam[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(lam[1] == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(lam[2] == doctest::Approx(-1.5).epsilon(1e-10));

  // Factor along the radius: alpha(alpha+2)/(2 r^(2 alpha + 2)).
  double alpha = 0.7;
  auto w = make_log_power(3, alpha);
  for (double r : {0.5, 1.0, 2.2}) {
    Vec mu = eigenvalues_of_jet(w->jet({r, 0.0, 0.0}, JetMethod::analytic));
    double C = alpha * (alpha + 2.0) / (2.0 * std::pow(r, 2.0 * alpha + 2.0));
    CHECK(mu[0] == doctest::Approx(C).epsilon(1e-10));
    CHECK(mu[1] == doctest::Approx(-C).epsilon(1e-10));
    CHECK(mu[2] == doctest::Approx(-C).epsilon(1e-10));
  }
}

TEST_CASE("single-variable eigenvalue formulas") {
  auto z = one_var_eigenvalues(1.2, 0.0, 0.0);
  CHECK(z.first == 0.0);
  CHECK(z.second == 0.0);

  auto p = one_var_eigenvalues(0.0, -1.0, 0.0);
  CHECK(p.first == doctest::Approx(0.5));
  CHECK(p.second == doctest::Approx(-0.5));

  // Oracle: full tensor of the linear field v = -x_n.
  auto v = make_affine(3, {0.0, 0.0, -1.0}, 0.0);
  Vec lam = eigenvalues_of_jet(v->jet({0.2, 0.4, 0.0}, JetMethod::analytic));
  CHECK(lam[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lam[2] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("shifted min-type profile satisfies l1 + mu l2 = 0") {
  double mu = 3.0, c = 1.0;
  auto v = make_one_var_min_f(3, mu, c);
  for (double t : {0.0, 0.4, 1.5}) {
    Jet j = v->jet({0.0, 0.0, t}, JetMethod::analytic);
    auto [l1, l2] = one_var_eigenvalues(j.value, j.gradient[2], j.hessian.at(2, 2));
    CHECK(std::fabs(l1 + mu * l2) <= 1e-12);
    // Oracle: FD jet + generic eigen-decomposition (FD hessian noise ~1e-5).
    Vec lam = eigenvalues_of_jet(v->jet({0.0, 0.0, t}, JetMethod::finite_difference));
    CHECK(std::fabs(lam[0] - l1) <= 2e-4 * std::max(1.0, std::fabs(l1)));
    CHECK(std::fabs(lam[2] - l2) <= 2e-4 * std::max(1.0, std::fabs(l2)));
  }
}

TEST_CASE("radial eigenvalue formula") {
  // Bubble profile at r=1 for a=b=1: v = -log(1+r^2).
  double r = 1.0;
  double v = -std::log(2.0), v1 = -2.0 * r / 2.0, v2 = -2.0 / 2.0 + 4.0 * r * r / 4.0;
  Vec lam = radial_eigenvalues(3, r, v, v1, v2);
  for (double l : lam) CHECK(l == doctest::Approx(2.0).epsilon(1e-12));

  Vec lt = radial_eigenvalues(4, 2.0, 0.3, 0.0, -1.0);
  CHECK(lt[0] > 0.0);
  CHECK(lt[1] == 0.0);
  CHECK(lt[3] == 0.0);

  Vec lp = radial_eigenvalues(3, 1.0, 0.0, 1.0, -1.0);  // log_power alpha=1 data
  CHECK(lp[0] == doctest::Approx(1.5));
  CHECK(lp[2] == doctest::Approx(-1.5));

  CHECK_THROWS_AS(radial_eigenvalues(3, 0.0, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("closed forms agree with the generic eigensolver on random jets") {
  Rng rng(404);
  for (int k = 0; k < 60; ++k) {
    int n = rng.uniform_int(2, 6);
    double g = rng.uniform(-1.0, 1.0), g1 = rng.uniform(-2.0, 2.0), g2 = rng.uniform(-2.0, 2.0);
    if (k % 2 == 0) {
      double r = rng.uniform(0.3, 2.5);
      Vec dir(n, 0.0);
      for (int i = 0; i < n; ++i) dir[i] = rng.normal();
      dir = (1.0 / norm2(dir)) * dir;
      Vec closed = radial_eigenvalues(n, r, g, g1, g2);
      Vec generic = eigenvalues_of_jet(radial_jet(n, r, g, g1, g2, dir));
      CHECK(max_abs_diff(closed, generic) <= 1e-10);
    } else {
      double t = rng.uniform(-1.0, 1.0);
      auto [l1, l2] = one_var_eigenvalues(g, g1, g2);
      Vec expect(n, l2);
      expect[0] = l1;
      expect = sort_descending(expect);
      Vec generic = eigenvalues_of_jet(one_var_jet(n, t, g, g1, g2));
      CHECK(max_abs_diff(expect, generic) <= 1e-10);
    }
  }
}

TEST_CASE("adding a constant rescales the spectrum by exp(-2k)") {
  Rng rng(55);
  auto v = make_bubble(3, {1.1, 0.6, {0.3, -0.2, 0.5}});
  for (int k = 0; k < 10; ++k) {
    Vec x = rng.uniform_vec(3, -1.5, 1.5);
    double kappa = rng.uniform(-1.0, 1.0);
    Jet j = v->jet(x, JetMethod::analytic);
    Vec lam = eigenvalues_of_jet(j);
    Jet shifted = j;
    shifted.value += kappa;
    Vec lam2 = eigenvalues_of_jet(shifted);
    double s = std::exp(-2.0 * kappa);
    for (int i = 0; i < 3; ++i)
      CHECK(lam2[i] == doctest::Approx(s * lam[i]).epsilon(1e-12));
  }
}

TEST_CASE("boundary values under both conventions") {
  auto zero = make_constant(3, 0.0);
  Jet j0 = zero->jet({0.4, 0.1, 0.0}, JetMethod::analytic);
  CHECK(boundary_value(j0, BoundaryConvention::neumann) == 0.0);
  CHECK(boundary_value(j0, BoundaryConvention::geometric) == 0.0);

  auto v = make_bubble(3, {1.0, 1.0, {0.0, 0.0, 0.5}});
  Jet j = v->jet({0.7, -0.4, 0.0}, JetMethod::analytic);
  CHECK(boundary_value(j, BoundaryConvention::neumann) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(boundary_value(j, BoundaryConvention::geometric) == doctest::Approx(-1.0).epsilon(1e-10));

  auto lin = make_affine(3, {0.0, 0.0, 0.3}, 0.0);
  Jet jl = lin->jet({0.0, 0.0, 0.0}, JetMethod::analytic);
  CHECK(boundary_value(jl, BoundaryConvention::neumann) == doctest::Approx(0.3));

  Jet off = v->jet({0.0, 0.0, 0.4}, JetMethod::analytic);
  CHECK_THROWS_AS(boundary_value(off, BoundaryConvention::neumann), DomainError);
}

TEST_CASE("random bubbles: spectrum and boundary datum") {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    int n = rng.uniform_int(2, 5);
    double a = rng.uniform(0.4, 2.5), b = rng.uniform(0.2, 3.0);
    Vec xbar = rng.uniform_vec(n, -1.0, 1.0);
    auto v = make_bubble(n, {a, b, xbar});
    double expect = 2.0 * b / (a * a);
    for (int k = 0; k < 20; ++k) {
      Vec x = rng.uniform_vec(n, -2.0, 2.0);
      Vec lam = eigenvalues_of_jet(v->jet(x, JetMethod::analytic));
      for (double l : lam) CHECK(std::fabs(l - expect) <= 1e-10 * std::max(1.0, expect));
    }
    Vec bx = rng.uniform_vec(n, -2.0, 2.0);
    bx[n - 1] = 0.0;
    double nv = boundary_value(v->jet(bx, JetMethod::analytic), BoundaryConvention::neumann);
    CHECK(std::fabs(nv - 2.0 * b / a * xbar[n - 1]) <= 1e-10);
  }
}

TEST_CASE("Ricci and conformal spectra exchange through the linear map") {
  Vec in{1.0, -1.0, -1.0};
  Vec out = ricci_transform(in, RicciDirection::schouten_to_ricci);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(-2.0));
  CHECK(out[2] == doctest::Approx(-2.0));

  for (int n : {3, 4, 6}) {
    double t = 0.37;
    Vec te(n, t);
    Vec r = ricci_transform(te, RicciDirection::schouten_to_ricci);
    for (double x : r) CHECK(x == doctest::Approx((2.0 * n - 2.0) * t).epsilon(1e-13));
  }

  Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    int n = rng.uniform_int(3, 6);
    Vec lam = sort_descending(rng.uniform_vec(n, -2.0, 2.0));
    Vec back = ricci_transform(ricci_transform(lam, RicciDirection::schouten_to_ricci),
                               RicciDirection::ricci_to_schouten);
    CHECK(max_abs_diff(lam, back) <= 1e-12);
  }

  CHECK_THROWS_AS(ricci_transform(Vec{1.0, 0.0}, RicciDirection::schouten_to_ricci), DomainError);
  CHECK_THROWS_AS(ricci_transform(Vec{0.0, 1.0, 0.0}, RicciDirection::schouten_to_ricci),
                  InputError);

  RicciMap m = ricci_map(5);
  CHECK(max_abs_diff(m.T * m.Tinv, Matrix::identity(5)) <= 1e-12);
}

TEST_CASE("normalized bubble has unit Ricci spectrum") {
  for (int n : {3, 4, 5}) {
    double a = 1.0;
    double b = a * a / (4.0 * (n - 1.0));
    auto v = make_bubble(n, {a, b, Vec(n, 0.0)});
    Vec lam = eigenvalues_of_jet(v->jet(Vec(n, 0.25), JetMethod::analytic));
    Vec ric = ricci_transform(lam, RicciDirection::schouten_to_ricci);
    for (double x : ric) CHECK(x == doctest::Approx(1.0).epsilon(1e-10));
  }
}
