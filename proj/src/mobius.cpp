#include "confhess/mobius.hpp"

#include <cmath>

#include "confhess/common.hpp"

namespace confhess {

namespace {

int atom_dim(const MobiusAtom& a) {
  if (auto* t = std::get_if<Translation>(&a)) return static_cast<int>(t->t.size());
  if (auto* o = std::get_if<Orthogonal>(&a)) return o->O.rows;
  if (auto* i = std::get_if<Inversion>(&a)) return static_cast<int>(i->center.size());
  return 0;  // dilation is dimension-free
}

MPoint apply_atom(const MobiusAtom& a, const MPoint& p) {
  if (auto* t = std::get_if<Translation>(&a)) {
    if (p.infinite) return p;
    return MPoint::finite(p.x + t->t);
  }
  if (auto* d = std::get_if<Dilation>(&a)) {
    if (p.infinite) return p;
    return MPoint::finite(d->s * p.x);
  }
  if (auto* o = std::get_if<Orthogonal>(&a)) {
    if (p.infinite) return p;
    return MPoint::finite(matvec(o->O, p.x));
  }
  const auto& inv = std::get<Inversion>(a);
  if (p.infinite) return MPoint::finite(inv.center);
  Vec z = p.x - inv.center;
  double r2 = dot(z, z);
  if (r2 == 0.0) return MPoint::at_infinity();
  return MPoint::finite(inv.center + (inv.radius * inv.radius / r2) * z);
}

}  // namespace

void validate_map(const MobiusMap& map) {
  if (map.n < 2) throw ParamError("mobius map: dimension must be >= 2");
  for (const auto& a : map.atoms) {
    int d = atom_dim(a);
    if (d != 0 && d != map.n) throw InputError("mobius map: atom dimension mismatch");
    if (auto* dil = std::get_if<Dilation>(&a)) {
      if (!(dil->s > 0.0)) throw ParamError("mobius map: dilation factor must be positive");
    } else if (auto* o = std::get_if<Orthogonal>(&a)) {
      if (o->O.rows != o->O.cols || !is_orthogonal(o->O, 1e-12))
        throw InputError("mobius map: matrix is not orthogonal within 1e-12");
    } else if (auto* inv = std::get_if<Inversion>(&a)) {
      if (!(inv->radius > 0.0)) throw ParamError("mobius map: inversion radius must be positive");
    }
  }
}

MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner) {
  if (outer.n != inner.n) throw InputError("compose: dimension mismatch");
  MobiusMap m{inner.n, inner.atoms};
  m.atoms.insert(m.atoms.end(), outer.atoms.begin(), outer.atoms.end());
  return m;
}

MPoint mobius_apply(const MobiusMap& map, const MPoint& p) {
  validate_map(map);
  MPoint cur = p;
  for (const auto& a : map.atoms) cur = apply_atom(a, cur);
  return cur;
}

MPoint mobius_apply(const MobiusMap& map, const Vec& x) {
  return mobius_apply(map, MPoint::finite(x));
}

double jacobian_log_det(const MobiusMap& map, const Vec& x) {
  validate_map(map);
  MPoint cur = MPoint::finite(x);
  double acc = 0.0;
  for (const auto& a : map.atoms) {
    if (cur.infinite) throw DomainError("jacobian_log_det: intermediate point at infinity");
    if (auto* d = std::get_if<Dilation>(&a)) {
      acc += std::log(d->s);
    } else if (auto* inv = std::get_if<Inversion>(&a)) {
      double r = norm2(cur.x - inv->center);
      if (r <= kSingularGuard) throw DomainError("jacobian_log_det: point at inversion center");
      acc += 2.0 * (std::log(inv->radius) - std::log(r));
    }
    cur = apply_atom(a, cur);
  }
  if (cur.infinite) throw DomainError("jacobian_log_det: image at infinity");
  return acc;
}

// ---------------------------------------------------------------------------
// Pushforward field

namespace {

// Pulls the jet of the partial pushforward u_inner at atom(y) back through one
// atom: u(y) = u_inner(atom(y)) + l(y) with l = (1/n) log |J_atom|, so
// grad u = A^T grad u_inner + grad l, and
// hess u = A^T H A + sum_k (grad u_inner)_k hess(atom_k) + hess l.
Jet pull_through(const MobiusAtom& a, const Vec& y, const Jet& inner) {
  const int n = static_cast<int>(y.size());
  Jet out;
  out.point = y;
  if (std::holds_alternative<Translation>(a)) {
    out.value = inner.value;
    out.gradient = inner.gradient;
    out.hessian = inner.hessian;
    return out;
  }
  if (auto* d = std::get_if<Dilation>(&a)) {
    out.value = inner.value + std::log(d->s);
    out.gradient = d->s * inner.gradient;
    out.hessian = scaled(d->s * d->s, inner.hessian);
    return out;
  }
  if (auto* o = std::get_if<Orthogonal>(&a)) {
    out.value = inner.value;
    out.gradient = matvec_t(o->O, inner.gradient);
    out.hessian = transpose(o->O) * inner.hessian * o->O;
    return out;
  }
  const auto& inv = std::get<Inversion>(a);
  Vec z = y - inv.center;
  double r2 = dot(z, z);
  double r = std::sqrt(r2);
  if (r <= kSingularGuard) throw DomainError("pushforward: point at inversion center");
  double rho2 = inv.radius * inv.radius;
  Vec zh = (1.0 / r) * z;
  Matrix A = scaled(rho2 / r2, Matrix::identity(n) - scaled(2.0, outer(zh, zh)));
  const Vec& g = inner.gradient;
  double gz = dot(g, z);
  // Contraction of the inner gradient with the atom's second derivatives.
  Matrix C(n, n);
  double f0 = 2.0 * rho2 / (r2 * r2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      C.at(i, j) = f0 * (-g[i] * z[j] - g[j] * z[i] - (i == j ? gz : 0.0) +
                         4.0 * z[i] * z[j] * gz / r2);
  out.value = inner.value + 2.0 * (std::log(inv.radius) - std::log(r));
  out.gradient = matvec_t(A, g) + (-2.0 / r2) * z;
  Matrix Hl = scaled(-2.0 / r2, Matrix::identity(n)) + scaled(4.0 / (r2 * r2), outer(z, z));
  out.hessian = transpose(A) * inner.hessian * A + C + Hl;
  return out;
}

class PushforwardField final : public ScalarField {
 public:
  PushforwardField(FieldPtr base, MobiusMap map)
      : ScalarField(base->dim()), base_(std::move(base)), map_(std::move(map)) {
    if (map_.n != dim()) throw InputError("pushforward: map/field dimension mismatch");
    validate_map(map_);
  }

  bool has_analytic_jets() const override { return base_->has_analytic_jets(); }

  bool in_domain(const Vec& y) const override {
    if (!ScalarField::in_domain(y)) return false;
    MPoint cur = MPoint::finite(y);
    for (const auto& a : map_.atoms) {
      if (cur.infinite) return false;
      if (auto* inv = std::get_if<Inversion>(&a))
        if (norm2(cur.x - inv->center) <= kSingularGuard) return false;
      cur = apply_atom(a, cur);
    }
    return !cur.infinite && base_->in_domain(cur.x);
  }

  double value(const Vec& y) const override {
    require_domain(y);
    MPoint img = mobius_apply(map_, y);
    return base_->value(img.x) + jacobian_log_det(map_, y);
  }

 protected:
  Jet analytic_jet(const Vec& y) const override { return fold_jet(0, y); }

 private:
  Jet fold_jet(size_t i, const Vec& y) const {
    if (i == map_.atoms.size()) return base_->jet(y, JetMethod::analytic);
    MPoint img = apply_atom(map_.atoms[i], MPoint::finite(y));
    if (img.infinite) throw DomainError("pushforward: intermediate point at infinity");
    Jet inner = fold_jet(i + 1, img.x);
    return pull_through(map_.atoms[i], y, inner);
  }

  FieldPtr base_;
  MobiusMap map_;
};

}  // namespace

FieldPtr pushforward(FieldPtr v, const MobiusMap& map) {
  return std::make_shared<PushforwardField>(std::move(v), map);
}

FieldPtr kelvin(FieldPtr v, const Vec& x, double lam) {
  if (static_cast<int>(x.size()) != v->dim()) throw InputError("kelvin: center dimension mismatch");
  if (!(lam > 0.0)) throw ParamError("kelvin: lam must be positive");
  if (std::fabs(x.back()) > 1e-12) throw ParamError("kelvin: center must lie on the boundary");
  MobiusMap m{v->dim(), {Inversion{x, lam}}};
  return pushforward(std::move(v), m);
}

MobiusMap normalize_gradient_map(const Vec& q, double lam, std::optional<Matrix> Oprime) {
  const int n = static_cast<int>(q.size()) + 1;
  if (n < 2) throw ParamError("normalize_gradient_map: need n >= 2");
  if (norm2(q) == 0.0)
    throw ParamError("normalize_gradient_map: q must be nonzero (nothing to normalize)");
  if (lam == 0.0) throw ParamError("normalize_gradient_map: lam must be nonzero");
  Matrix Op = Oprime ? *Oprime : Matrix::identity(n - 1);
  if (Op.rows != n - 1 || Op.cols != n - 1 || !is_orthogonal(Op, 1e-12))
    throw InputError("normalize_gradient_map: Oprime must be (n-1)x(n-1) orthogonal");

  Matrix O = Matrix::identity(n);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) O.at(i, j) = Op.at(i, j);

  Vec w(n, 0.0);
  for (int i = 0; i < n - 1; ++i) w[i] = q[i];
  Vec xbar = (0.5 * lam * lam) * matvec_t(O, w);  // last coordinate stays 0

  double xb2 = dot(xbar, xbar);
  Vec shift = (lam * lam / xb2 - 1.0) * xbar;
  MobiusMap m{n, {Inversion{xbar, std::fabs(lam)}, Translation{shift}, Orthogonal{O}}};
  validate_map(m);
  return m;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json map_to_json(const MobiusMap& map) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : map.atoms) {
    if (auto* t = std::get_if<Translation>(&a)) {
      arr.push_back({{"translation", {{"t", t->t}}}});
    } else if (auto* d = std::get_if<Dilation>(&a)) {
      arr.push_back({{"dilation", {{"s", d->s}}}});
    } else if (auto* o = std::get_if<Orthogonal>(&a)) {
      std::vector<Vec> rows;
      for (int i = 0; i < o->O.rows; ++i) {
        Vec row(o->O.cols);
        for (int j = 0; j < o->O.cols; ++j) row[j] = o->O.at(i, j);
        rows.push_back(std::move(row));
      }
      arr.push_back({{"orthogonal", {{"matrix", rows}}}});
    } else {
      const auto& inv = std::get<Inversion>(a);
      arr.push_back({{"inversion", {{"center", inv.center}, {"radius", inv.radius}}}});
    }
  }
  return arr;
}

MobiusMap map_from_json(const nlohmann::json& j, int n) {
  if (!j.is_array()) throw InputError("map JSON: expected an array of atoms");
  MobiusMap m{n, {}};
  for (const auto& item : j) {
    if (!item.is_object() || item.size() != 1)
      throw InputError("map JSON: each atom must be a single-key object");
    const auto& key = item.begin().key();
    const auto& body = item.begin().value();
    if (key == "translation") {
      m.atoms.push_back(Translation{body.at("t").get<Vec>()});
    } else if (key == "dilation") {
      m.atoms.push_back(Dilation{body.at("s").get<double>()});
    } else if (key == "orthogonal") {
      auto rows = body.at("matrix").get<std::vector<Vec>>();
      Matrix O(static_cast<int>(rows.size()),
               rows.empty() ? 0 : static_cast<int>(rows.front().size()));
      for (int i = 0; i < O.rows; ++i)
        for (int jj = 0; jj < O.cols; ++jj) O.at(i, jj) = rows[i][jj];
      m.atoms.push_back(Orthogonal{O});
    } else if (key == "inversion") {
      m.atoms.push_back(Inversion{body.at("center").get<Vec>(), body.at("radius").get<double>()});
    } else {
      throw InputError("map JSON: unknown atom kind '" + key + "'");
    }
  }
  validate_map(m);
  return m;
}

}  // namespace confhess
