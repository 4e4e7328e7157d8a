#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "confhess/field.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// Point of the compactified space R^n plus a single point at infinity.
struct MPoint {
  bool infinite = false;
  Vec x;

  static MPoint at_infinity() { return MPoint{true, {}}; }
  static MPoint finite(Vec p) { return MPoint{false, std::move(p)}; }
};

struct Translation {
  Vec t;
};
struct Dilation {
  double s = 1.0;  // s > 0
};
struct Orthogonal {
  Matrix O;
};
struct Inversion {
  Vec center;
  double radius = 1.0;  // > 0
};
using MobiusAtom = std::variant<Translation, Dilation, Orthogonal, Inversion>;

// Finite composition of atoms, applied first-to-last:
// apply(map, x) = atom_k(... atom_1(x)).
struct MobiusMap {
  int n = 0;
  std::vector<MobiusAtom> atoms;
};

// Throws ParamError / InputError on malformed atoms (non-positive dilation or
// radius, non-orthogonal matrix, size mismatches).
void validate_map(const MobiusMap& map);

MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner);  // inner first

MPoint mobius_apply(const MobiusMap& map, const MPoint& p);
MPoint mobius_apply(const MobiusMap& map, const Vec& x);

// (1/n) log |J_phi(x)|. Throws DomainError when x or an intermediate image
// hits an inversion center or infinity.
double jacobian_log_det(const MobiusMap& map, const Vec& x);

// v_phi = v(phi(y)) + (1/n) log|J_phi(y)|; analytic jets via per-atom chain
// rule when the base field has them, FD otherwise.
FieldPtr pushforward(FieldPtr v, const MobiusMap& map);

// Kelvin transform about the sphere of radius lam centered at the boundary
// point x (x_n = 0): single-inversion pushforward.
FieldPtr kelvin(FieldPtr v, const Vec& x, double lam);

// Boundary-fixing map that cancels the tangential gradient q at the origin:
// psi = orthogonal(O) . translation(lam^2 xbar/|xbar|^2 - xbar) . inversion(xbar, |lam|)
// with xbar = (lam^2/2) O^T (q, 0) and O = blockdiag(Oprime, 1).
// q has length n-1 and must be nonzero.
MobiusMap normalize_gradient_map(const Vec& q, double lam = 1.0,
                                 std::optional<Matrix> Oprime = {});

nlohmann::json map_to_json(const MobiusMap& map);
MobiusMap map_from_json(const nlohmann::json& j, int n);

}  // namespace confhess
