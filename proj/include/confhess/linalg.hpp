#pragma once

#include <cstddef>
#include <vector>

#include "confhess/common.hpp"

namespace confhess {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);          // Euclidean norm
double norm_inf(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

// Dense row-major matrix, sized for dimensions up to ~16.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Matrix identity(int n);
};

Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix scaled(double s, const Matrix& A);
Matrix transpose(const Matrix& A);
Vec matvec(const Matrix& A, const Vec& x);
Vec matvec_t(const Matrix& A, const Vec& x);  // A^T x
Matrix outer(const Vec& u, const Vec& v);
double norm_max(const Matrix& A);  // max |a_ij|

// ||A - A^T||_max; 0 for exactly symmetric storage.
double asymmetry(const Matrix& A);

// Checks asymmetry(A) <= tol * max(1, ||A||_max), then returns (A + A^T)/2.
// Throws InputError past tolerance.
Matrix require_symmetric(const Matrix& A, double tol = 1e-12);

bool is_orthogonal(const Matrix& O, double tol = 1e-10);

struct EigenSym {
  Vec values;      // descending
  Matrix vectors;  // columns follow values
};

// Cyclic-sweep Jacobi rotations on a symmetric matrix. Deterministic sweep
// order, converges for n <= 16 well inside 64 sweeps. Residual guarantee
// ||M q_i - lambda_i q_i|| <= 1e-10 ||M|| checked by tests, not here.
EigenSym eigen_sym(const Matrix& M, double sym_tol = 1e-12);

// Convenience: eigenvalues only, descending.
Vec eigenvalues_sym(const Matrix& M, double sym_tol = 1e-12);

// Least squares min ||Ax - b|| via Householder QR with column checks.
// Throws NumericError when A is numerically rank deficient.
Vec least_squares(const Matrix& A, const Vec& b);

bool sorted_descending(const Vec& v);
Vec sort_descending(Vec v);

}  // namespace confhess
