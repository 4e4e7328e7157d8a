#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "confhess/expr.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// Value, gradient, and Hessian of a scalar field at a point.
struct Jet {
  Vec point;
  double value = 0.0;
  Vec gradient;
  Matrix hessian;
};

enum class JetMethod { analytic, finite_difference };

// Guard radius around excluded points (log singularities, inversion centers).
inline constexpr double kSingularGuard = 1e-8;

class ScalarField {
 public:
  explicit ScalarField(int n);
  virtual ~ScalarField() = default;

  int dim() const { return n_; }
  virtual bool has_analytic_jets() const { return true; }
  virtual bool in_domain(const Vec& x) const;

  // Throws DomainError outside the domain.
  virtual double value(const Vec& x) const = 0;

  // method = analytic requires has_analytic_jets(); finite_difference uses
  // 5-point central stencils with per-coordinate step max(1,|x_i|)*eps^(1/3)
  // and throws DomainError if the stencil leaves the domain.
  Jet jet(const Vec& x, JetMethod method) const;

  // Analytic when available, FD otherwise.
  Jet best_jet(const Vec& x) const;

 protected:
  virtual Jet analytic_jet(const Vec& x) const;
  void require_domain(const Vec& x) const;

 private:
  int n_;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

// Serializable description: {"kind": ..., "n": ..., "params": {...}}.
struct FieldSpec {
  std::string kind;
  int n = 0;
  nlohmann::json params = nlohmann::json::object();
};

FieldSpec field_spec_from_json(const nlohmann::json& j);
nlohmann::json field_spec_to_json(const FieldSpec& spec);
FieldSpec load_field_spec(const std::string& path);

// Factory for the serializable kinds: bubble, log_power, log_power_drift,
// barrier_w_delta, one_var_tabulated, one_var_min_f, custom.
// Throws ParamError for out-of-range parameters, InputError for unknown kinds.
FieldPtr make_field(const FieldSpec& spec);

// v = log(a / (1 + b|x - xbar|^2)), a,b > 0.
struct BubbleParams {
  double a = 1.0, b = 1.0;
  Vec xbar;
};
FieldPtr make_bubble(int n, const BubbleParams& p);

// v = alpha log|x|; domain excludes |x| <= guard.
FieldPtr make_log_power(int n, double alpha);

// v = alpha log|x| + 2c x_n - 10 c^2 |x|^2.
FieldPtr make_log_power_drift(int n, double alpha, double c);

// v = (2/(mu-1)) log(eps (rho^(1-mu) - delta)), rho = |x - e_n|,
// domain guard < rho < delta^(-1/(mu-1)).
FieldPtr make_barrier(int n, double mu, double delta, double eps);
double barrier_outer_radius(double mu, double delta);

// v depending on x_n only: (2/(mu-1)) log(1 + k x_n), k = (mu-1)c/2.
FieldPtr make_one_var_min_f(int n, double mu, double c);

// v(x) = spline(x_n) with knots (t_i, v_i); optional clamped end slopes.
FieldPtr make_one_var_tabulated(int n, const Vec& knots_t, const Vec& knots_v,
                                std::optional<std::pair<double, double>> end_slopes = {});

// Value-only callback; jets always finite-difference.
FieldPtr make_custom_field(int n, std::function<double(const Vec&)> fn,
                           std::optional<std::function<bool(const Vec&)>> domain = {});

// Simple analytic building blocks used by tests and counterexample fields.
FieldPtr make_constant(int n, double c);
FieldPtr make_affine(int n, const Vec& g, double c);            // g.x + c
FieldPtr make_quadratic(int n, const Matrix& Q, const Vec& g, double c);  // x^T Q x / 2 + g.x + c
FieldPtr make_sum(std::vector<FieldPtr> parts);

// Cubic interpolating spline; natural unless end slopes are clamped.
class CubicSpline {
 public:
  CubicSpline(Vec t, Vec y, std::optional<std::pair<double, double>> end_slopes = {});
  double tmin() const { return t_.front(); }
  double tmax() const { return t_.back(); }
  // Throws DomainError outside [tmin, tmax].
  void eval(double x, double& v, double& d1, double& d2) const;

 private:
  Vec t_, y_, m_;  // m: second derivatives at knots
};

}  // namespace confhess
