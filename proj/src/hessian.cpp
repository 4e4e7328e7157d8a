#include "confhess/hessian.hpp"

#include <cmath>

#include "confhess/common.hpp"

namespace confhess {

Matrix conformal_hessian_w(const Jet& j) {
  const int n = static_cast<int>(j.gradient.size());
  if (j.hessian.rows != n || j.hessian.cols != n) throw InputError("jet: hessian size mismatch");
  double g2 = dot(j.gradient, j.gradient);
  Matrix W = scaled(-1.0, j.hessian) + outer(j.gradient, j.gradient) -
             scaled(0.5 * g2, Matrix::identity(n));
  return require_symmetric(W, 1e-12);
}

Matrix conformal_hessian(const Jet& j) {
  return scaled(std::exp(-2.0 * j.value), conformal_hessian_w(j));
}

Vec eigenvalues(const Matrix& M) { return eigenvalues_sym(M, 1e-12); }

Vec eigenvalues_of_jet(const Jet& j) { return eigenvalues(conformal_hessian(j)); }

std::pair<double, double> one_var_eigenvalues(double v, double v1, double v2) {
  double w = std::exp(-2.0 * v);
  double l1 = w * (-v2 + 0.5 * v1 * v1);
  double l2 = -0.5 * w * v1 * v1;
  return {l1, l2};
}

Vec radial_eigenvalues(int n, double r, double v, double v1, double v2) {
  if (!(r > 0.0)) throw DomainError("radial_eigenvalues: r must be positive");
  if (n < 2) throw ParamError("radial_eigenvalues: n must be >= 2");
  double w = std::exp(-2.0 * v);
  double l1 = w * (-v2 + 0.5 * v1 * v1);
  double lt = w * (-v1 / r - 0.5 * v1 * v1);
  Vec out(n, lt);
  out[0] = l1;
  return sort_descending(out);
}

double boundary_value(const Jet& j, BoundaryConvention convention) {
  if (j.point.empty()) throw InputError("boundary_value: jet has no point");
  if (std::fabs(j.point.back()) > 1e-12)
    throw DomainError("boundary_value: point is not on the boundary hyperplane");
  double nv = std::exp(-j.value) * j.gradient.back();
  return convention == BoundaryConvention::neumann ? nv : -nv;
}

RicciMap ricci_map(int n) {
  if (n < 3) throw DomainError("ricci_map: requires dimension n >= 3");
  RicciMap m;
  m.n = n;
  Vec e(n, 1.0);
  m.T = scaled(static_cast<double>(n - 2), Matrix::identity(n)) + outer(e, e);
  m.Tinv = scaled(1.0 / (n - 2),
                  Matrix::identity(n) - scaled(1.0 / (2.0 * n - 2.0), outer(e, e)));
  return m;
}

Vec ricci_transform(const Vec& lams, RicciDirection dir) {
  const int n = static_cast<int>(lams.size());
  if (n < 3) throw DomainError("ricci_transform: requires dimension n >= 3");
  if (!sorted_descending(lams)) throw InputError("ricci_transform: eigenvalue list must be sorted descending");
  RicciMap m = ricci_map(n);
  Vec out = matvec(dir == RicciDirection::schouten_to_ricci ? m.T : m.Tinv, lams);
  return sort_descending(out);
}

}  // namespace confhess
