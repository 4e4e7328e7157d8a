#include "confhess/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace confhess {

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Matrix Matrix::identity(int n) {
  Matrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}

Matrix scaled(double s, const Matrix& A) {
  Matrix C = A;
  for (double& x : C.a) x *= s;
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Vec matvec(const Matrix& A, const Vec& x) {
  Vec y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0;
    for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vec matvec_t(const Matrix& A, const Vec& x) {
  Vec y(A.cols, 0.0);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) y[j] += A.at(i, j) * x[i];
  return y;
}

Matrix outer(const Vec& u, const Vec& v) {
  Matrix M(static_cast<int>(u.size()), static_cast<int>(v.size()));
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) M.at(static_cast<int>(i), static_cast<int>(j)) = u[i] * v[j];
  return M;
}

double norm_max(const Matrix& A) {
  double m = 0;
  for (double x : A.a) m = std::max(m, std::fabs(x));
  return m;
}

double asymmetry(const Matrix& A) {
  double m = 0;
  for (int i = 0; i < A.rows; ++i)
    for (int j = i + 1; j < A.cols; ++j) m = std::max(m, std::fabs(A.at(i, j) - A.at(j, i)));
  return m;
}

Matrix require_symmetric(const Matrix& A, double tol) {
  if (A.rows != A.cols) throw InputError("require_symmetric: matrix is not square");
  double bound = tol * std::max(1.0, norm_max(A));
  if (asymmetry(A) > bound) throw InputError("require_symmetric: asymmetry exceeds tolerance");
  Matrix S = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = i + 1; j < A.cols; ++j) {
      double v = 0.5 * (A.at(i, j) + A.at(j, i));
      S.at(i, j) = v;
      S.at(j, i) = v;
    }
  return S;
}

bool is_orthogonal(const Matrix& O, double tol) {
  if (O.rows != O.cols) return false;
  Matrix P = transpose(O) * O;
  Matrix I = Matrix::identity(O.rows);
  return norm_max(P - I) <= tol;
}

EigenSym eigen_sym(const Matrix& M_in, double sym_tol) {
  Matrix M = require_symmetric(M_in, sym_tol);
  const int n = M.rows;
  Matrix V = Matrix::identity(n);
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += M.at(p, q) * M.at(p, q);
    if (off <= 1e-300) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = M.at(p, q);
        if (apq == 0.0) continue;
        double app = M.at(p, p), aqq = M.at(q, q);
        double scale = std::fabs(app) + std::fabs(aqq) + std::fabs(apq);
        if (scale + std::fabs(apq) == scale) {
          M.at(p, q) = M.at(q, p) = 0.0;
          continue;
        }
        // Classic stable rotation: tan via the smaller root.
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = M.at(k, p), mkq = M.at(k, q);
          M.at(k, p) = c * mkp - s * mkq;
          M.at(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = M.at(p, k), mqk = M.at(q, k);
          M.at(p, k) = c * mpk - s * mqk;
          M.at(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V.at(k, p), vkq = V.at(k, q);
          V.at(k, p) = c * vkp - s * vkq;
          V.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return M.at(i, i) > M.at(j, j); });
  EigenSym out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = M.at(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = V.at(i, order[j]);
  }
  return out;
}

Vec eigenvalues_sym(const Matrix& M, double sym_tol) { return eigen_sym(M, sym_tol).values; }

Vec least_squares(const Matrix& A_in, const Vec& b_in) {
  Matrix A = A_in;
  Vec b = b_in;
  const int m = A.rows, n = A.cols;
  if (m < n) throw NumericError("least_squares: underdetermined system");
  double scale = norm_max(A);
  if (scale == 0.0) throw NumericError("least_squares: zero matrix");
  for (int k = 0; k < n; ++k) {
    double nrm = 0;
    for (int i = k; i < m; ++i) nrm += A.at(i, k) * A.at(i, k);
    nrm = std::sqrt(nrm);
    if (nrm <= 1e-12 * scale * std::sqrt(static_cast<double>(m)))
      throw NumericError("least_squares: rank deficient");
    double alpha = (A.at(k, k) >= 0) ? -nrm : nrm;
    Vec v(m - k, 0.0);
    v[0] = A.at(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[i - k] = A.at(i, k);
    double vnorm2 = dot(v, v);
    if (vnorm2 == 0.0) continue;
    for (int j = k; j < n; ++j) {
      double s = 0;
      for (int i = k; i < m; ++i) s += v[i - k] * A.at(i, j);
      s *= 2.0 / vnorm2;
      for (int i = k; i < m; ++i) A.at(i, j) -= s * v[i - k];
    }
    double s = 0;
    for (int i = k; i < m; ++i) s += v[i - k] * b[i];
    s *= 2.0 / vnorm2;
    for (int i = k; i < m; ++i) b[i] -= s * v[i - k];
  }
  Vec x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A.at(i, j) * x[j];
    double d = A.at(i, i);
    if (std::fabs(d) <= 1e-14 * scale) throw NumericError("least_squares: singular R");
    x[i] = s / d;
  }
  return x;
}

bool sorted_descending(const Vec& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] < v[i]) return false;
  return true;
}

Vec sort_descending(Vec v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

}  // namespace confhess
