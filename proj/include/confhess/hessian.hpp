#pragma once

#include <utility>

#include "confhess/field.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// A[v] = e^(-2v) (-hess v + grad v x grad v - |grad v|^2/2 I).
Matrix conformal_hessian(const Jet& j);

// W[v] = e^(2v) A[v]; same tensor without the conformal weight.
Matrix conformal_hessian_w(const Jet& j);

// Descending eigenvalues of a symmetric matrix; InputError past the
// symmetry tolerance (relative 1e-12).
Vec eigenvalues(const Matrix& M);

// Convenience: eigenvalues of A[v] at the jet's point.
Vec eigenvalues_of_jet(const Jet& j);

// Field depending on x_n only: spectrum is (l1, l2, ..., l2) with
// l1 = e^(-2v)(-v'' + v'^2/2), l2 = -e^(-2v) v'^2/2.
std::pair<double, double> one_var_eigenvalues(double v, double v1, double v2);

// Radial field: l1 = e^(-2v)(-v'' + v'^2/2) once,
// l_i = e^(-2v)(-v'/r - v'^2/2) with multiplicity n-1; result sorted
// descending. r must be positive.
Vec radial_eigenvalues(int n, double r, double v, double v1, double v2);

enum class BoundaryConvention { neumann, geometric };

// neumann: e^(-v) dv/dx_n; geometric: its negation (boundary mean curvature).
// The jet's point must satisfy |x_n| <= 1e-12.
double boundary_value(const Jet& j, BoundaryConvention convention);

enum class RicciDirection { schouten_to_ricci, ricci_to_schouten };

struct RicciMap {
  int n = 0;
  Matrix T;     // (n-2) I + e e^T
  Matrix Tinv;
};
RicciMap ricci_map(int n);  // n >= 3

// Applies T (or its inverse) to a descending eigenvalue list and re-sorts.
Vec ricci_transform(const Vec& lams, RicciDirection dir);

}  // namespace confhess
