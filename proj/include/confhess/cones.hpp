#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confhess/linalg.hpp"

namespace confhess {

// Nonnegative scalar that may be reported as unbounded.  Used for the cone
// ray constant, the least c with (c, -1, ..., -1) in the closed cone.
struct MuValue {
  bool unbounded = false;
  double value = 0.0;  // meaningful only when !unbounded

  static MuValue finite(double v) { return MuValue{false, v}; }
  static MuValue infinite() { return MuValue{true, 0.0}; }
};

enum class ConeStatus { interior, boundary, exterior };

const char* to_string(ConeStatus s);

// Open symmetric eigenvalue cone {g > 0}.  The defining function receives a
// descending-sorted copy of its input, so its value is permutation invariant
// by construction.  g(lam + t e) must be nondecreasing in t >= 0; custom
// cones are sample-checked for this at construction.
class Cone {
 public:
  // Defining function; the argument is always sorted descending.
  using Defining = std::function<double(const Vec&)>;

  Cone(int n, std::string name, Defining g,
       std::optional<MuValue> known_mu = std::nullopt);

  int dim() const { return n_; }
  const std::string& name() const { return name_; }

  // Defining-function value; input is copied and sorted internally.
  double value(const Vec& lams) const;

  // Closed-form ray constant when one is known for this cone family.
  const std::optional<MuValue>& known_mu_minus() const { return known_mu_; }

 private:
  int n_;
  std::string name_;
  Defining g_;
  std::optional<MuValue> known_mu_;
};

using ConePtr = std::shared_ptr<const Cone>;

// Symmetric function of the eigenvalues together with the cone it is
// elliptic on.  Evaluators receive descending-sorted input.
class SymFunc {
 public:
  using Evaluator = std::function<double(const Vec&)>;

  SymFunc(int n, std::string name, Evaluator f, std::optional<double> degree,
          ConePtr domain);

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  // Homogeneity degree when the family has one (min_mu_shifted does not).
  const std::optional<double>& degree() const { return degree_; }
  const ConePtr& domain() const { return domain_; }

  // Evaluates without any membership check; input is sorted internally.
  // Integrators use this on candidate eigenvalues that may sit outside the
  // cone mid-search.
  double value_unchecked(const Vec& lams) const;

 private:
  int n_;
  std::string name_;
  Evaluator f_;
  std::optional<double> degree_;
  ConePtr domain_;
};

using SymFuncPtr = std::shared_ptr<const SymFunc>;

struct ConeConstants {
  MuValue mu_minus;
  bool lambda_star_in_closure = false;  // (1, -1, ..., -1) in the closed cone
  bool e_n_on_boundary = false;         // (0, ..., 0, 1) on the cone boundary
};

// Cone factories. Parameter ranges: 1 <= k <= n, 1 <= p <= n-1, mu > 0.
// gamma_k: min of the first k elementary symmetric sums.
// g_p: p * (sum of the n-p largest) + (n-p) * (sum of the rest).
// min_mu: min_i(lam_i + (mu+1)/(2(n-1)) * sum_{j != i} lam_j).
// affine: lam_(1) + s * lam_(2) on the order statistics.
ConePtr make_gamma_k_cone(int n, int k);
ConePtr make_g_p_cone(int n, int p);
ConePtr make_min_mu_cone(int n, double mu);
ConePtr make_affine_cone(int n, double s);

// Custom cone from a defining function; when validate is set, monotonicity
// along e is sample-checked (InputError on failure).
ConePtr make_custom_cone(int n, std::string name, Cone::Defining g,
                         std::optional<MuValue> known_mu = std::nullopt,
                         bool validate = true);

// Custom cone from an expression over lam1..lamn (operators + - * / and
// min/max/pow; no other functions).  The expression sees sorted input with
// lam1 the largest.
ConePtr make_expression_cone(int n, const std::string& expr_text,
                             std::string name = "custom",
                             std::optional<MuValue> known_mu = std::nullopt);

// JSON file: {"expr": "...", "name"?: str, "mu_minus"?: number|"unbounded"}.
ConePtr load_cone_file(const std::string& path, int n);

// Symmetric-function factories; each comes paired with its natural cone.
SymFuncPtr make_sigma_k_func(int n, int k);
SymFuncPtr make_g_p_func(int n, int p);
SymFuncPtr make_min_mu_func(int n, double mu);
// min_i(lam_i + mu/(n-1) * sum_{j != i} lam_j) + 1; not homogeneous.
SymFuncPtr make_min_mu_shifted_func(int n, double mu);
// lam_(1) + s * lam_(2); degree 1.
SymFuncPtr make_affine_func(int n, double s);
// Expression function; paired with `domain` (defaults to gamma_k(1)).
SymFuncPtr make_expression_func(int n, const std::string& expr_text,
                                std::string name = "custom",
                                std::optional<double> degree = std::nullopt,
                                ConePtr domain = nullptr);

// JSON file: {"expr": "...", "degree"?: number, "cone"?: catalog name}.
SymFuncPtr load_symfunc_file(const std::string& path, int n);

// Catalog-name parsers used by the CLI and by spec files:
//   cones: gamma_k:<k>, g_p:<p>, min_mu:<mu>, affine:<s>, custom:<file>
//   funcs: sigma_k:<k>, g_p:<p>, min_mu:<mu>, min_mu_shifted:<mu>,
//          affine:<s>, custom:<file>
ConePtr cone_from_name(const std::string& name, int n);
SymFuncPtr symfunc_from_name(const std::string& name, int n);

// Standard cone instances for dimension n, used by catalog-wide checks.
std::vector<ConePtr> cone_catalog(int n);

// Classification of a descending-sorted eigenvalue list: interior when
// g >= tol*scale, exterior when g <= -tol*scale, boundary between, with
// scale = max(1, |lams|).  Unsorted input is an InputError.
ConeStatus cone_status(const Cone& c, const Vec& lams, double tol = 1e-9);

// g(lams) / max(1, |lams|); accepts any order (sorted internally).
double cone_margin(const Cone& c, const Vec& lams);

// Least c in [0, 1e6] with (c, -1, ..., -1) in the closed cone, located by
// scanning for a sign change of g along the ray and bisecting; unbounded
// when no sign change occurs below the cap.
MuValue mu_minus(const Cone& c, double tol = 1e-8);

// Ray constant plus the two membership flags, each checked directly via
// cone_status rather than derived from mu_minus alone.
ConeConstants cone_constants(const Cone& c, double tol = 1e-8);

// Checked evaluation: lams must be sorted descending and must not be
// exterior to f's paired cone (DomainError otherwise).
double f_eval(const SymFunc& f, const Vec& lams, double tol = 1e-9);

// Growth-exponent admissibility: p >= 0 and p < mu + 1 (any p >= 0 when the
// ray constant is unbounded).
bool exponent_in_growth_range(double p, const MuValue& mu);

// Sampled falsifier for the ellipticity/normalization conditions; it can
// reject a function but never certify one.  All sampling is seeded and
// deterministic.
struct ConditionsReport {
  double min_partial = 0.0;   // least finite-difference partial on a shell
  double max_partial = 0.0;
  double min_norm_on_level = 0.0;  // least |lam| with |f(lam)-1| <= 0.01
  double fitted_degree = 0.0;      // slope of log f(t lam) against log t
  double level_boundary_distance = 0.0;  // least distance of f=1 samples
                                         // to the cone boundary
  int samples_used = 0;
  std::uint64_t seed = 0;
};

ConditionsReport check_conditions(const SymFunc& f, const Cone& c,
                                  int sample_count, std::uint64_t seed);

}  // namespace confhess
