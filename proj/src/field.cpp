#include "confhess/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confhess/common.hpp"
#include "confhess/jsonio.hpp"

namespace confhess {

namespace {

double fd_base_step() {
  static const double h = std::cbrt(std::numeric_limits<double>::epsilon());
  return h;
}

void check_point(const Vec& x, int n) {
  if (static_cast<int>(x.size()) != n) throw InputError("point dimension mismatch");
  for (double c : x)
    if (!std::isfinite(c)) throw DomainError("point has non-finite coordinate");
}

}  // namespace

ScalarField::ScalarField(int n) : n_(n) {
  if (n < 2) throw ParamError("field dimension must be >= 2");
}

bool ScalarField::in_domain(const Vec& x) const {
  if (static_cast<int>(x.size()) != n_) return false;
  for (double c : x)
    if (!std::isfinite(c)) return false;
  return true;
}

void ScalarField::require_domain(const Vec& x) const {
  check_point(x, n_);
  if (!in_domain(x)) throw DomainError("point outside field domain");
}

Jet ScalarField::analytic_jet(const Vec&) const {
  throw InputError("field kind has no analytic jets");
}

Jet ScalarField::best_jet(const Vec& x) const {
  return jet(x, has_analytic_jets() ? JetMethod::analytic : JetMethod::finite_difference);
}

Jet ScalarField::jet(const Vec& x, JetMethod method) const {
  require_domain(x);
  if (method == JetMethod::analytic) {
    if (!has_analytic_jets()) throw InputError("analytic jets unavailable for this field kind");
    return analytic_jet(x);
  }

  const int n = n_;
  Vec h(n);
  for (int i = 0; i < n; ++i) h[i] = std::max(1.0, std::fabs(x[i])) * fd_base_step();

  auto shifted = [&](int i, double si, int j, double sj) {
    Vec y = x;
    y[i] += si * h[i];
    if (j >= 0) y[j] += sj * h[j];
    return y;
  };
  // All stencil points must be inside the domain before any evaluation.
  for (int i = 0; i < n; ++i)
    for (double s : {-2.0, -1.0, 1.0, 2.0})
      if (!in_domain(shifted(i, s, -1, 0)))
        throw DomainError("finite-difference stencil leaves the field domain");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (double si : {-1.0, 1.0})
        for (double sj : {-1.0, 1.0})
          if (!in_domain(shifted(i, si, j, sj)))
            throw DomainError("finite-difference stencil leaves the field domain");

  Jet out;
  out.point = x;
  out.value = value(x);
  out.gradient.assign(n, 0.0);
  out.hessian = Matrix(n, n);

  for (int i = 0; i < n; ++i) {
    double fp1 = value(shifted(i, 1, -1, 0));
    double fm1 = value(shifted(i, -1, -1, 0));
    double fp2 = value(shifted(i, 2, -1, 0));
    double fm2 = value(shifted(i, -2, -1, 0));
    out.gradient[i] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h[i]);
    out.hessian.at(i, i) =
        (-fp2 + 16.0 * fp1 - 30.0 * out.value + 16.0 * fm1 - fm2) / (12.0 * h[i] * h[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double fpp = value(shifted(i, 1, j, 1));
      double fpm = value(shifted(i, 1, j, -1));
      double fmp = value(shifted(i, -1, j, 1));
      double fmm = value(shifted(i, -1, j, -1));
      double d = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      out.hessian.at(i, j) = d;
      out.hessian.at(j, i) = d;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form families

namespace {

class ConstantField final : public ScalarField {
 public:
  ConstantField(int n, double c) : ScalarField(n), c_(c) {}
  double value(const Vec& x) const override {
    require_domain(x);
    return c_;
  }

 protected:
  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    j.value = c_;
    j.gradient.assign(dim(), 0.0);
    j.hessian = Matrix(dim(), dim());
    return j;
  }

 private:
  double c_;
};

class AffineField final : public ScalarField {
 public:
  AffineField(int n, Vec g, double c) : ScalarField(n), g_(std::move(g)), c_(c) {
    if (static_cast<int>(g_.size()) != n) throw ParamError("affine field: gradient size mismatch");
  }
  double value(const Vec& x) const override {
    require_domain(x);
    return dot(g_, x) + c_;
  }

 protected:
  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    j.value = dot(g_, x) + c_;
    j.gradient = g_;
    j.hessian = Matrix(dim(), dim());
    return j;
  }

 private:
  Vec g_;
  double c_;
};

class QuadraticField final : public ScalarField {
 public:
  QuadraticField(int n, const Matrix& Q, Vec g, double c)
      : ScalarField(n), Q_(require_symmetric(Q)), g_(std::move(g)), c_(c) {
    if (Q_.rows != n || static_cast<int>(g_.size()) != n)
      throw ParamError("quadratic field: size mismatch");
  }
  double value(const Vec& x) const override {
    require_domain(x);
    return 0.5 * dot(x, matvec(Q_, x)) + dot(g_, x) + c_;
  }

 protected:
  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    Vec Qx = matvec(Q_, x);
    j.value = 0.5 * dot(x, Qx) + dot(g_, x) + c_;
    j.gradient = Qx + g_;
    j.hessian = Q_;
    return j;
  }

 private:
  Matrix Q_;
  Vec g_;
  double c_;
};

class BubbleField final : public ScalarField {
 public:
  BubbleField(int n, BubbleParams p) : ScalarField(n), p_(std::move(p)) {
    if (!(p_.a > 0.0) || !(p_.b > 0.0)) throw ParamError("bubble: a and b must be positive");
    if (p_.xbar.empty()) p_.xbar.assign(n, 0.0);
    if (static_cast<int>(p_.xbar.size()) != n) throw ParamError("bubble: center size mismatch");
  }
  double value(const Vec& x) const override {
    require_domain(x);
    Vec z = x - p_.xbar;
    return std::log(p_.a) - std::log1p(p_.b * dot(z, z));
  }

 protected:
  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    Vec z = x - p_.xbar;
    double D = 1.0 + p_.b * dot(z, z);
    j.value = std::log(p_.a) - std::log1p(p_.b * dot(z, z));
    j.gradient = (-2.0 * p_.b / D) * z;
    j.hessian = scaled(-2.0 * p_.b / D, Matrix::identity(dim())) +
                scaled(4.0 * p_.b * p_.b / (D * D), outer(z, z));
    return j;
  }

 private:
  BubbleParams p_;
};

// v(x) = g(|x - center|) for a radial profile g; assembles jets from
// (g, g', g'') with grad = g' zhat, hess = g'' zhat zhat^T + (g'/r)(I - zhat zhat^T).
class RadialProfileField : public ScalarField {
 public:
  RadialProfileField(int n, Vec center, double rmin, double rmax)
      : ScalarField(n), center_(std::move(center)), rmin_(rmin), rmax_(rmax) {}

  bool in_domain(const Vec& x) const override {
    if (!ScalarField::in_domain(x)) return false;
    double r = norm2(x - center_);
    return r > rmin_ && r < rmax_;
  }

  double value(const Vec& x) const override {
    require_domain(x);
    double g, g1, g2;
    profile(norm2(x - center_), g, g1, g2);
    return g;
  }

 protected:
  virtual void profile(double r, double& g, double& g1, double& g2) const = 0;

  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    Vec z = x - center_;
    double r = norm2(z);
    double g, g1, g2;
    profile(r, g, g1, g2);
    Vec zh = (1.0 / r) * z;
    j.value = g;
    j.gradient = g1 * zh;
    Matrix P = outer(zh, zh);
    j.hessian = scaled(g2, P) + scaled(g1 / r, Matrix::identity(dim()) - P);
    return j;
  }

 private:
  Vec center_;
  double rmin_, rmax_;
};

class LogPowerField final : public RadialProfileField {
 public:
  LogPowerField(int n, double alpha)
      : RadialProfileField(n, Vec(n, 0.0), kSingularGuard,
                           std::numeric_limits<double>::infinity()),
        alpha_(alpha) {
    if (!std::isfinite(alpha)) throw ParamError("log_power: alpha must be finite");
  }

 protected:
  void profile(double r, double& g, double& g1, double& g2) const override {
    g = alpha_ * std::log(r);
    g1 = alpha_ / r;
    g2 = -alpha_ / (r * r);
  }

 private:
  double alpha_;
};

class BarrierField final : public RadialProfileField {
 public:
  BarrierField(int n, double mu, double delta, double eps)
      : RadialProfileField(n, unit_last(n), kSingularGuard,
                           barrier_outer_radius(mu, delta)),
        mu_(mu), delta_(delta), eps_(eps) {
    if (!(mu > 1.0)) throw ParamError("barrier: mu must exceed 1");
    if (!(delta > 0.0)) throw ParamError("barrier: delta must be positive");
    if (!(eps > 0.0)) throw ParamError("barrier: eps must be positive");
  }

 protected:
  void profile(double r, double& g, double& g1, double& g2) const override {
    double t = std::pow(r, 1.0 - mu_) - delta_;
    if (!(t > 0.0)) throw DomainError("barrier: point beyond outer radius");
    double K = 2.0 / (mu_ - 1.0);
    double t1 = (1.0 - mu_) * std::pow(r, -mu_);
    double t2 = -mu_ * (1.0 - mu_) * std::pow(r, -mu_ - 1.0);
    g = K * (std::log(eps_) + std::log(t));
    g1 = K * t1 / t;
    g2 = K * (t2 * t - t1 * t1) / (t * t);
  }

 private:
  static Vec unit_last(int n) {
    Vec e(n, 0.0);
    e[n - 1] = 1.0;
    return e;
  }
  double mu_, delta_, eps_;
};

// v(x) = g(x_n): grad = g' e_n, hess = g'' e_n e_n^T.
class OneVarProfileField : public ScalarField {
 public:
  using ScalarField::ScalarField;

  bool in_domain(const Vec& x) const override {
    return ScalarField::in_domain(x) && t_in_domain(x[dim() - 1]);
  }

  double value(const Vec& x) const override {
    require_domain(x);
    double g, g1, g2;
    profile(x[dim() - 1], g, g1, g2);
    return g;
  }

 protected:
  virtual bool t_in_domain(double t) const = 0;
  virtual void profile(double t, double& g, double& g1, double& g2) const = 0;

  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    double g, g1, g2;
    profile(x[dim() - 1], g, g1, g2);
    j.value = g;
    j.gradient.assign(dim(), 0.0);
    j.gradient[dim() - 1] = g1;
    j.hessian = Matrix(dim(), dim());
    j.hessian.at(dim() - 1, dim() - 1) = g2;
    return j;
  }
};

class OneVarMinFField final : public OneVarProfileField {
 public:
  OneVarMinFField(int n, double mu, double c) : OneVarProfileField(n), mu_(mu), c_(c) {
    if (!(mu > 1.0)) throw ParamError("one_var_min_f: mu must exceed 1");
    k_ = 0.5 * (mu - 1.0) * c;
  }

 protected:
  bool t_in_domain(double t) const override { return 1.0 + k_ * t > 0.0; }
  void profile(double t, double& g, double& g1, double& g2) const override {
    double D = 1.0 + k_ * t;
    double K = 2.0 / (mu_ - 1.0);
    g = K * std::log(D);
    g1 = K * k_ / D;
    g2 = -K * k_ * k_ / (D * D);
  }

 private:
  double mu_, c_, k_ = 0.0;
};

class TabulatedField final : public OneVarProfileField {
 public:
  TabulatedField(int n, CubicSpline spline) : OneVarProfileField(n), s_(std::move(spline)) {}

 protected:
  bool t_in_domain(double t) const override { return t >= s_.tmin() && t <= s_.tmax(); }
  void profile(double t, double& g, double& g1, double& g2) const override {
    s_.eval(t, g, g1, g2);
  }

 private:
  CubicSpline s_;
};

class CustomField final : public ScalarField {
 public:
  CustomField(int n, std::function<double(const Vec&)> fn,
              std::optional<std::function<bool(const Vec&)>> domain)
      : ScalarField(n), fn_(std::move(fn)), domain_(std::move(domain)) {
    if (!fn_) throw ParamError("custom field: empty callback");
  }
  bool has_analytic_jets() const override { return false; }
  bool in_domain(const Vec& x) const override {
    if (!ScalarField::in_domain(x)) return false;
    return domain_ ? (*domain_)(x) : true;
  }
  double value(const Vec& x) const override {
    require_domain(x);
    return fn_(x);
  }

 private:
  std::function<double(const Vec&)> fn_;
  std::optional<std::function<bool(const Vec&)>> domain_;
};

class SumField final : public ScalarField {
 public:
  explicit SumField(std::vector<FieldPtr> parts)
      : ScalarField(parts.empty() ? 2 : parts.front()->dim()), parts_(std::move(parts)) {
    if (parts_.empty()) throw ParamError("sum field: no parts");
    for (const auto& p : parts_)
      if (p->dim() != dim()) throw ParamError("sum field: dimension mismatch");
  }
  bool has_analytic_jets() const override {
    return std::all_of(parts_.begin(), parts_.end(),
                       [](const FieldPtr& p) { return p->has_analytic_jets(); });
  }
  bool in_domain(const Vec& x) const override {
    if (!ScalarField::in_domain(x)) return false;
    return std::all_of(parts_.begin(), parts_.end(),
                       [&](const FieldPtr& p) { return p->in_domain(x); });
  }
  double value(const Vec& x) const override {
    require_domain(x);
    double s = 0;
    for (const auto& p : parts_) s += p->value(x);
    return s;
  }

 protected:
  Jet analytic_jet(const Vec& x) const override {
    Jet j;
    j.point = x;
    j.gradient.assign(dim(), 0.0);
    j.hessian = Matrix(dim(), dim());
    for (const auto& p : parts_) {
      Jet pj = p->jet(x, JetMethod::analytic);
      j.value += pj.value;
      j.gradient = j.gradient + pj.gradient;
      j.hessian = j.hessian + pj.hessian;
    }
    return j;
  }

 private:
  std::vector<FieldPtr> parts_;
};

}  // namespace

double barrier_outer_radius(double mu, double delta) {
  if (!(mu > 1.0) || !(delta > 0.0)) throw ParamError("barrier radius: need mu > 1, delta > 0");
  return std::pow(delta, -1.0 / (mu - 1.0));
}

FieldPtr make_bubble(int n, const BubbleParams& p) { return std::make_shared<BubbleField>(n, p); }

FieldPtr make_log_power(int n, double alpha) { return std::make_shared<LogPowerField>(n, alpha); }

FieldPtr make_log_power_drift(int n, double alpha, double c) {
  if (!std::isfinite(alpha) || !std::isfinite(c))
    throw ParamError("log_power_drift: parameters must be finite");
  Vec lin(n, 0.0);
  lin[n - 1] = 2.0 * c;
  Matrix Q = scaled(-20.0 * c * c, Matrix::identity(n));
  return make_sum({make_log_power(n, alpha), make_quadratic(n, Q, lin, 0.0)});
}

FieldPtr make_barrier(int n, double mu, double delta, double eps) {
  return std::make_shared<BarrierField>(n, mu, delta, eps);
}

FieldPtr make_one_var_min_f(int n, double mu, double c) {
  return std::make_shared<OneVarMinFField>(n, mu, c);
}

FieldPtr make_one_var_tabulated(int n, const Vec& knots_t, const Vec& knots_v,
                                std::optional<std::pair<double, double>> end_slopes) {
  return std::make_shared<TabulatedField>(n, CubicSpline(knots_t, knots_v, end_slopes));
}

FieldPtr make_custom_field(int n, std::function<double(const Vec&)> fn,
                           std::optional<std::function<bool(const Vec&)>> domain) {
  return std::make_shared<CustomField>(n, std::move(fn), std::move(domain));
}

FieldPtr make_constant(int n, double c) { return std::make_shared<ConstantField>(n, c); }

FieldPtr make_affine(int n, const Vec& g, double c) {
  return std::make_shared<AffineField>(n, g, c);
}

FieldPtr make_quadratic(int n, const Matrix& Q, const Vec& g, double c) {
  return std::make_shared<QuadraticField>(n, Q, g, c);
}

FieldPtr make_sum(std::vector<FieldPtr> parts) {
  return std::make_shared<SumField>(std::move(parts));
}

// ---------------------------------------------------------------------------
// Cubic spline

CubicSpline::CubicSpline(Vec t, Vec y, std::optional<std::pair<double, double>> end_slopes)
    : t_(std::move(t)), y_(std::move(y)) {
  const int N = static_cast<int>(t_.size());
  if (N < 2 || y_.size() != t_.size()) throw InputError("spline: need >= 2 matching knots");
  for (int i = 1; i < N; ++i)
    if (!(t_[i] > t_[i - 1])) throw InputError("spline: knots must be strictly increasing");

  // Tridiagonal system for knot second derivatives (natural or clamped ends).
  Vec diag(N), sub(N, 0.0), sup(N, 0.0), rhs(N, 0.0);
  auto h = [&](int i) { return t_[i + 1] - t_[i]; };
  auto slope = [&](int i) { return (y_[i + 1] - y_[i]) / h(i); };
  if (end_slopes) {
    diag[0] = h(0) / 3.0;
    sup[0] = h(0) / 6.0;
    rhs[0] = slope(0) - end_slopes->first;
    sub[N - 1] = h(N - 2) / 6.0;
    diag[N - 1] = h(N - 2) / 3.0;
    rhs[N - 1] = end_slopes->second - slope(N - 2);
  } else {
    diag[0] = 1.0;
    diag[N - 1] = 1.0;
  }
  for (int i = 1; i + 1 < N; ++i) {
    sub[i] = h(i - 1) / 6.0;
    diag[i] = (h(i - 1) + h(i)) / 3.0;
    sup[i] = h(i) / 6.0;
    rhs[i] = slope(i) - slope(i - 1);
  }
  // Thomas algorithm.
  Vec c(N, 0.0), d(N, 0.0);
  c[0] = sup[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (int i = 1; i < N; ++i) {
    double den = diag[i] - sub[i] * c[i - 1];
    c[i] = (i + 1 < N) ? sup[i] / den : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
  }
  m_.assign(N, 0.0);
  m_[N - 1] = d[N - 1];
  for (int i = N - 2; i >= 0; --i) m_[i] = d[i] - c[i] * m_[i + 1];
}

void CubicSpline::eval(double x, double& v, double& d1, double& d2) const {
  if (!(x >= t_.front() && x <= t_.back())) throw DomainError("spline: point outside knot range");
  int i = static_cast<int>(std::upper_bound(t_.begin(), t_.end(), x) - t_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(t_.size()) - 2);
  double h = t_[i + 1] - t_[i];
  double A = t_[i + 1] - x, B = x - t_[i];
  v = m_[i] * A * A * A / (6.0 * h) + m_[i + 1] * B * B * B / (6.0 * h) +
      (y_[i] / h - m_[i] * h / 6.0) * A + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * B;
  d1 = -m_[i] * A * A / (2.0 * h) + m_[i + 1] * B * B / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
       (m_[i + 1] - m_[i]) * h / 6.0;
  d2 = m_[i] * A / h + m_[i + 1] * B / h;
}

// ---------------------------------------------------------------------------
// FieldSpec JSON

FieldSpec field_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("n") || !j.contains("params"))
    throw InputError("field spec: expected object with kind, n, params");
  FieldSpec s;
  if (!j["kind"].is_string()) throw InputError("field spec: kind must be a string");
  s.kind = j["kind"].get<std::string>();
  if (!j["n"].is_number_integer()) throw InputError("field spec: n must be an integer");
  s.n = j["n"].get<int>();
  if (!j["params"].is_object()) throw InputError("field spec: params must be an object");
  s.params = j["params"];
  return s;
}

nlohmann::json field_spec_to_json(const FieldSpec& spec) {
  return nlohmann::json{{"kind", spec.kind}, {"n", spec.n}, {"params", spec.params}};
}

FieldSpec load_field_spec(const std::string& path) {
  return field_spec_from_json(parse_json_file(path));
}

namespace {

double need_number(const nlohmann::json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number())
    throw InputError(std::string("field spec: missing numeric param '") + key + "'");
  return p[key].get<double>();
}

Vec need_vector(const nlohmann::json& p, const char* key, int n) {
  if (!p.contains(key) || !p[key].is_array() || static_cast<int>(p[key].size()) != n)
    throw InputError(std::string("field spec: param '") + key + "' must be an array of length n");
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!p[key][i].is_number()) throw InputError("field spec: array entries must be numbers");
    v[i] = p[key][i].get<double>();
  }
  return v;
}

}  // namespace

FieldPtr make_field(const FieldSpec& spec) {
  if (spec.n < 2) throw ParamError("field spec: n must be >= 2");
  const auto& p = spec.params;
  if (spec.kind == "bubble") {
    BubbleParams bp;
    bp.a = need_number(p, "a");
    bp.b = need_number(p, "b");
    bp.xbar = p.contains("xbar") ? need_vector(p, "xbar", spec.n) : Vec(spec.n, 0.0);
    return make_bubble(spec.n, bp);
  }
  if (spec.kind == "log_power") return make_log_power(spec.n, need_number(p, "alpha"));
  if (spec.kind == "log_power_drift")
    return make_log_power_drift(spec.n, need_number(p, "alpha"), need_number(p, "c"));
  if (spec.kind == "barrier_w_delta")
    return make_barrier(spec.n, need_number(p, "mu"), need_number(p, "delta"),
                        need_number(p, "eps"));
  if (spec.kind == "one_var_min_f")
    return make_one_var_min_f(spec.n, need_number(p, "mu"), need_number(p, "c"));
  if (spec.kind == "one_var_tabulated") {
    if (!p.contains("t") || !p.contains("v") || !p["t"].is_array() || !p["v"].is_array())
      throw InputError("field spec: one_var_tabulated needs arrays t and v");
    Vec t = p["t"].get<Vec>();
    Vec v = p["v"].get<Vec>();
    std::optional<std::pair<double, double>> slopes;
    if (p.contains("end_slopes")) {
      if (!p["end_slopes"].is_array() || p["end_slopes"].size() != 2)
        throw InputError("field spec: end_slopes must be a 2-array");
      slopes = {p["end_slopes"][0].get<double>(), p["end_slopes"][1].get<double>()};
    }
    return make_one_var_tabulated(spec.n, t, v, slopes);
  }
  if (spec.kind == "custom") {
    if (!p.contains("expr") || !p["expr"].is_string())
      throw InputError("field spec: custom kind needs string param 'expr'");
    std::vector<std::string> names(spec.n);
    for (int i = 0; i < spec.n; ++i) names[i] = "x" + std::to_string(i + 1);
    Expr e = Expr::parse(p["expr"].get<std::string>(), names);
    return make_custom_field(spec.n, [e](const Vec& x) { return e.eval(x); });
  }
  throw InputError("field spec: unknown kind '" + spec.kind + "'");
}

}  // namespace confhess
