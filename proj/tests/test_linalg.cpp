#include <doctest.h>

#include <cmath>

#include "confhess/linalg.hpp"
#include "test_util.hpp"

using namespace confhess;
using testutil::max_abs_diff;

TEST_CASE("eigenvalues of scalar and diagonal matrices") {
  Matrix M = scaled(2.0, Matrix::identity(4));
  Vec ev = eigenvalues_sym(M);
  for (double v : ev) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));

  Matrix D(3, 3);
  D.at(0, 0) = 1.0;
  D.at(1, 1) = -1.0;
  D.at(2, 2) = -1.0;
  Vec dv = eigenvalues_sym(D);
  CHECK(dv[0] == doctest::Approx(1.0));
  CHECK(dv[1] == doctest::Approx(-1.0));
  CHECK(dv[2] == doctest::Approx(-1.0));
}

TEST_CASE("2x2 with known spectrum") {
  Matrix M(2, 2);
  M.at(0, 0) = 2.0;
  M.at(0, 1) = 1.0;
  M.at(1, 0) = 1.0;
  M.at(1, 1) = 2.0;
  Vec ev = eigenvalues_sym(M);
  CHECK(ev[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random spectra recovered with backward-stable residuals") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + trial % 7;
    Matrix Q = testutil::random_orthogonal(rng, n);
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-5.0, 5.0);
    Matrix L(n, n);
    for (int i = 0; i < n; ++i) L.at(i, i) = lam[i];
    Matrix M = Q * L * transpose(Q);
    M = require_symmetric(M, 1e-10);

    EigenSym es = eigen_sym(M);
    CHECK(sorted_descending(es.values));
    Vec expect = sort_descending(lam);
    CHECK(max_abs_diff(es.values, expect) < 1e-9);

    double scale = norm_max(M);
    for (int j = 0; j < n; ++j) {
      Vec q(n);
      for (int i = 0; i < n; ++i) q[i] = es.vectors.at(i, j);
      Vec r = matvec(M, q) - es.values[j] * q;
      CHECK(norm2(r) <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("asymmetric input is rejected") {
  Matrix M(2, 2);
  M.at(0, 1) = 1.0;
  M.at(1, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(eigenvalues_sym(M), InputError);
  M.at(1, 0) = 1.0 + 1e-14;
  CHECK_NOTHROW(eigenvalues_sym(M));
}

TEST_CASE("least squares recovers exact polynomial coefficients") {
  // y = 3 - 2 t + 0.5 t^2 sampled at 7 points.
  Matrix A(7, 3);
  Vec b(7);
  for (int i = 0; i < 7; ++i) {
    double t = -1.0 + i * 0.35;
    A.at(i, 0) = 1.0;
    A.at(i, 1) = t;
    A.at(i, 2) = t * t;
    b[i] = 3.0 - 2.0 * t + 0.5 * t * t;
  }
  Vec x = least_squares(A, b);
  CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(x[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("least squares rejects rank-deficient systems") {
  Matrix A(4, 2);
  Vec b(4, 1.0);
  for (int i = 0; i < 4; ++i) {
    A.at(i, 0) = 1.0;
    A.at(i, 1) = 2.0;  // duplicate direction
  }
  CHECK_THROWS_AS(least_squares(A, b), NumericError);
}

TEST_CASE("orthogonality predicate") {
  Rng rng(99);
  Matrix Q = testutil::random_orthogonal(rng, 4);
  CHECK(is_orthogonal(Q, 1e-12));
  Q.at(0, 0) += 1e-6;
  CHECK_FALSE(is_orthogonal(Q, 1e-12));
}
