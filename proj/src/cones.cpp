#include "confhess/cones.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

#include "confhess/common.hpp"
#include "confhess/expr.hpp"
#include "confhess/jsonio.hpp"
#include "confhess/rng.hpp"

namespace confhess {

namespace {

constexpr double kMuMax = 1e6;

void require_dim(int n, const Vec& lams, const char* who) {
  if (static_cast<int>(lams.size()) != n) {
    std::ostringstream os;
    os << who << ": expected " << n << " eigenvalues, got " << lams.size();
    throw InputError(os.str());
  }
}

void require_sorted_descending(const Vec& lams, const char* who) {
  for (size_t i = 0; i + 1 < lams.size(); ++i) {
    if (lams[i] < lams[i + 1]) {
      std::ostringstream os;
      os << who << ": eigenvalue list must be sorted descending";
      throw InputError(os.str());
    }
  }
}

// Elementary symmetric sums e_1..e_k of the entries.
Vec elementary_sums(const Vec& lams, int k) {
  Vec e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (double lam : lams) {
    for (int j = k; j >= 1; --j) e[j] += lam * e[j - 1];
  }
  return e;
}

double sum(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// min over i of lam_i + beta * (sum - lam_i), plus shift.
double min_combination(const Vec& lams, double beta, double shift) {
  double s = sum(lams);
  double best = std::numeric_limits<double>::infinity();
  for (double lam : lams) best = std::min(best, lam + beta * (s - lam));
  return best + shift;
}

Vec ray_point(int n, double c) {
  Vec lams(n, -1.0);
  lams[0] = c;
  return lams;
}

// Sampled monotonicity along e; the defining function must not decrease.
void validate_monotone(const Cone& c) {
  Rng rng(0x636f6e65u);  // fixed seed: validation must be deterministic
  int n = c.dim();
  for (int trial = 0; trial < 64; ++trial) {
    Vec lams(n);
    double scale = (trial % 3 == 0) ? 0.5 : ((trial % 3 == 1) ? 1.0 : 3.0);
    for (int i = 0; i < n; ++i) lams[i] = scale * rng.normal();
    double base = c.value(lams);
    for (double t : {0.25, 1.0}) {
      Vec shifted = lams;
      for (int i = 0; i < n; ++i) shifted[i] += t;
      double v = c.value(shifted);
      if (v < base - 1e-9 * (1.0 + std::fabs(base))) {
        throw InputError("custom cone fails sampled monotonicity along e");
      }
    }
  }
}

// Restricted grammar for cone/function expressions: identifiers must be
// lam1..lamn or one of min/max/pow.
void validate_expression_grammar(const std::string& text, int n) {
  size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      std::string ident = text.substr(i, j - i);
      size_t k = j;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      bool is_call = k < text.size() && text[k] == '(';
      bool ok = false;
      if (is_call) {
        ok = ident == "min" || ident == "max" || ident == "pow";
      } else if (ident.size() > 3 && ident.compare(0, 3, "lam") == 0) {
        char* end = nullptr;
        long idx = std::strtol(ident.c_str() + 3, &end, 10);
        ok = end != nullptr && *end == '\0' && idx >= 1 && idx <= n;
      }
      if (!ok) {
        throw InputError("expression uses '" + ident +
                         "'; only lam1..lam" + std::to_string(n) +
                         " and min/max/pow are allowed");
      }
      i = j;
    } else {
      ++i;
    }
  }
}

std::vector<std::string> lam_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 1; i <= n; ++i) names.push_back("lam" + std::to_string(i));
  return names;
}

int parse_int_suffix(const std::string& text, const char* who) {
  char* end = nullptr;
  long v = std::strtol(text.c_str(), &end, 10);
  if (end == nullptr || *end != '\0' || text.empty()) {
    throw InputError(std::string(who) + ": bad integer '" + text + "'");
  }
  return static_cast<int>(v);
}

double parse_double_suffix(const std::string& text, const char* who) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || text.empty()) {
    throw InputError(std::string(who) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

const char* to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::interior: return "interior";
    case ConeStatus::boundary: return "boundary";
    case ConeStatus::exterior: return "exterior";
  }
  return "unknown";
}

Cone::Cone(int n, std::string name, Defining g, std::optional<MuValue> known_mu)
    : n_(n), name_(std::move(name)), g_(std::move(g)), known_mu_(known_mu) {
  if (n_ < 2) throw ParamError("cone dimension must be at least 2");
  if (!g_) throw ParamError("cone requires a defining function");
}

double Cone::value(const Vec& lams) const {
  require_dim(n_, lams, "cone");
  Vec sorted = lams;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  return g_(sorted);
}

SymFunc::SymFunc(int n, std::string name, Evaluator f,
                 std::optional<double> degree, ConePtr domain)
    : n_(n), name_(std::move(name)), f_(std::move(f)), degree_(degree),
      domain_(std::move(domain)) {
  if (n_ < 2) throw ParamError("symmetric function dimension must be at least 2");
  if (!f_) throw ParamError("symmetric function requires an evaluator");
  if (!domain_) throw ParamError("symmetric function requires a paired cone");
  if (domain_->dim() != n_) throw ParamError("paired cone dimension mismatch");
}

double SymFunc::value_unchecked(const Vec& lams) const {
  require_dim(n_, lams, "symmetric function");
  Vec sorted = lams;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  return f_(sorted);
}

ConePtr make_gamma_k_cone(int n, int k) {
  if (n < 2) throw ParamError("gamma_k: dimension must be at least 2");
  if (k < 1 || k > n) throw ParamError("gamma_k: k must lie in [1, n]");
  auto g = [k](const Vec& lams) {
    Vec e = elementary_sums(lams, k);
    double best = e[1];
    for (int j = 2; j <= k; ++j) best = std::min(best, e[j]);
    return best;
  };
  // Ray constant: k = 1 crosses at c = n-1; for k >= 2 the first two sums
  // demand c >= n-1 and c <= (n-2)/2 at once, so the ray never enters.
  auto mu = (k == 1) ? MuValue::finite(static_cast<double>(n - 1))
                     : MuValue::infinite();
  return std::make_shared<Cone>(n, "gamma_k:" + std::to_string(k), g, mu);
}

ConePtr make_g_p_cone(int n, int p) {
  if (n < 2) throw ParamError("g_p: dimension must be at least 2");
  if (p < 1 || p > n - 1) throw ParamError("g_p: p must lie in [1, n-1]");
  auto g = [n, p](const Vec& lams) {
    double top = 0.0, rest = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i < n - p) top += lams[i];
      else rest += lams[i];
    }
    return p * top + (n - p) * rest;
  };
  // Along the ray the value is p*(c - (2(n-p)-1)).
  auto mu = MuValue::finite(2.0 * (n - p) - 1.0);
  return std::make_shared<Cone>(n, "g_p:" + std::to_string(p), g, mu);
}

ConePtr make_min_mu_cone(int n, double mu) {
  if (n < 2) throw ParamError("min_mu: dimension must be at least 2");
  if (!(mu > 0.0)) throw ParamError("min_mu: mu must be positive");
  double beta = (mu + 1.0) / (2.0 * (n - 1.0));
  auto g = [beta](const Vec& lams) { return min_combination(lams, beta, 0.0); };
  // Both ray constraints are linear increasing in c; the entry point is the
  // larger of their roots.
  double root = std::max((mu + 1.0) / 2.0,
                         (n - 2.0) + 2.0 * (n - 1.0) / (mu + 1.0));
  std::ostringstream name;
  name << "min_mu:" << mu;
  return std::make_shared<Cone>(n, name.str(), g, MuValue::finite(root));
}

ConePtr make_affine_cone(int n, double s) {
  if (n < 2) throw ParamError("affine: dimension must be at least 2");
  if (!(s >= -1.0)) throw ParamError("affine: weight must be at least -1");
  auto g = [s](const Vec& lams) { return lams[0] + s * lams[1]; };
  std::ostringstream name;
  name << "affine:" << s;
  return std::make_shared<Cone>(n, name.str(), g,
                                MuValue::finite(std::max(s, 0.0)));
}

ConePtr make_custom_cone(int n, std::string name, Cone::Defining g,
                         std::optional<MuValue> known_mu, bool validate) {
  auto cone = std::make_shared<Cone>(n, std::move(name), std::move(g), known_mu);
  if (validate) validate_monotone(*cone);
  return cone;
}

ConePtr make_expression_cone(int n, const std::string& expr_text,
                             std::string name, std::optional<MuValue> known_mu) {
  validate_expression_grammar(expr_text, n);
  Expr expr = Expr::parse(expr_text, lam_names(n));
  auto g = [expr](const Vec& lams) { return expr.eval(lams); };
  return make_custom_cone(n, std::move(name), g, known_mu, /*validate=*/true);
}

ConePtr load_cone_file(const std::string& path, int n) {
  nlohmann::json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("expr") || !j["expr"].is_string()) {
    throw InputError("cone file must be an object with an \"expr\" string");
  }
  std::string name = j.value("name", std::string("custom"));
  std::optional<MuValue> known;
  if (j.contains("mu_minus")) {
    const auto& m = j["mu_minus"];
    if (m.is_string() && m.get<std::string>() == "unbounded") {
      known = MuValue::infinite();
    } else if (m.is_number()) {
      known = MuValue::finite(m.get<double>());
    } else {
      throw InputError("cone file: mu_minus must be a number or \"unbounded\"");
    }
  }
  return make_expression_cone(n, j["expr"].get<std::string>(), name, known);
}

SymFuncPtr make_sigma_k_func(int n, int k) {
  if (n < 2) throw ParamError("sigma_k: dimension must be at least 2");
  if (k < 1 || k > n) throw ParamError("sigma_k: k must lie in [1, n]");
  auto f = [k](const Vec& lams) { return elementary_sums(lams, k)[k]; };
  return std::make_shared<SymFunc>(n, "sigma_k:" + std::to_string(k), f,
                                   static_cast<double>(k),
                                   make_gamma_k_cone(n, k));
}

SymFuncPtr make_g_p_func(int n, int p) {
  ConePtr cone = make_g_p_cone(n, p);
  auto f = [cone](const Vec& lams) { return cone->value(lams); };
  return std::make_shared<SymFunc>(n, "g_p:" + std::to_string(p), f, 1.0, cone);
}

SymFuncPtr make_min_mu_func(int n, double mu) {
  ConePtr cone = make_min_mu_cone(n, mu);
  auto f = [cone](const Vec& lams) { return cone->value(lams); };
  return std::make_shared<SymFunc>(n, cone->name(), f, 1.0, cone);
}

SymFuncPtr make_min_mu_shifted_func(int n, double mu) {
  if (!(mu > 0.0)) throw ParamError("min_mu_shifted: mu must be positive");
  ConePtr cone = make_min_mu_cone(n, mu);
  double beta = mu / (n - 1.0);
  auto f = [beta](const Vec& lams) { return min_combination(lams, beta, 1.0); };
  std::ostringstream name;
  name << "min_mu_shifted:" << mu;
  return std::make_shared<SymFunc>(n, name.str(), f, std::nullopt, cone);
}

SymFuncPtr make_affine_func(int n, double s) {
  ConePtr cone = make_affine_cone(n, s);
  auto f = [cone](const Vec& lams) { return cone->value(lams); };
  return std::make_shared<SymFunc>(n, cone->name(), f, 1.0, cone);
}

SymFuncPtr make_expression_func(int n, const std::string& expr_text,
                                std::string name, std::optional<double> degree,
                                ConePtr domain) {
  validate_expression_grammar(expr_text, n);
  Expr expr = Expr::parse(expr_text, lam_names(n));
  auto f = [expr](const Vec& lams) { return expr.eval(lams); };
  if (!domain) domain = make_gamma_k_cone(n, 1);
  return std::make_shared<SymFunc>(n, std::move(name), f, degree,
                                   std::move(domain));
}

SymFuncPtr load_symfunc_file(const std::string& path, int n) {
  nlohmann::json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("expr") || !j["expr"].is_string()) {
    throw InputError("function file must be an object with an \"expr\" string");
  }
  std::string name = j.value("name", std::string("custom"));
  std::optional<double> degree;
  if (j.contains("degree")) {
    if (!j["degree"].is_number()) {
      throw InputError("function file: degree must be a number");
    }
    degree = j["degree"].get<double>();
  }
  ConePtr domain;
  if (j.contains("cone")) {
    if (!j["cone"].is_string()) {
      throw InputError("function file: cone must be a catalog name");
    }
    domain = cone_from_name(j["cone"].get<std::string>(), n);
  }
  return make_expression_func(n, j["expr"].get<std::string>(), name, degree,
                              domain);
}

ConePtr cone_from_name(const std::string& name, int n) {
  size_t colon = name.find(':');
  std::string head = name.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "gamma_k") return make_gamma_k_cone(n, parse_int_suffix(tail, "gamma_k"));
  if (head == "g_p") return make_g_p_cone(n, parse_int_suffix(tail, "g_p"));
  if (head == "min_mu") return make_min_mu_cone(n, parse_double_suffix(tail, "min_mu"));
  if (head == "affine") return make_affine_cone(n, parse_double_suffix(tail, "affine"));
  if (head == "custom") return load_cone_file(tail, n);
  throw InputError("unknown cone '" + name + "'");
}

SymFuncPtr symfunc_from_name(const std::string& name, int n) {
  size_t colon = name.find(':');
  std::string head = name.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "sigma_k") return make_sigma_k_func(n, parse_int_suffix(tail, "sigma_k"));
  if (head == "g_p") return make_g_p_func(n, parse_int_suffix(tail, "g_p"));
  if (head == "min_mu") return make_min_mu_func(n, parse_double_suffix(tail, "min_mu"));
  if (head == "min_mu_shifted") {
    return make_min_mu_shifted_func(n, parse_double_suffix(tail, "min_mu_shifted"));
  }
  if (head == "affine") return make_affine_func(n, parse_double_suffix(tail, "affine"));
  if (head == "custom") return load_symfunc_file(tail, n);
  throw InputError("unknown symmetric function '" + name + "'");
}

std::vector<ConePtr> cone_catalog(int n) {
  std::vector<ConePtr> cones;
  for (int k = 1; k <= n; ++k) cones.push_back(make_gamma_k_cone(n, k));
  for (int p = 1; p <= n - 1; ++p) cones.push_back(make_g_p_cone(n, p));
  for (double mu : {0.5, 1.0, 3.0}) cones.push_back(make_min_mu_cone(n, mu));
  for (double s : {0.5, 2.0}) cones.push_back(make_affine_cone(n, s));
  return cones;
}

ConeStatus cone_status(const Cone& c, const Vec& lams, double tol) {
  require_dim(c.dim(), lams, "cone_status");
  require_sorted_descending(lams, "cone_status");
  double g = c.value(lams);
  double scale = std::max(1.0, norm2(lams));
  if (g >= tol * scale) return ConeStatus::interior;
  if (g <= -tol * scale) return ConeStatus::exterior;
  return ConeStatus::boundary;
}

double cone_margin(const Cone& c, const Vec& lams) {
  require_dim(c.dim(), lams, "cone_margin");
  return c.value(lams) / std::max(1.0, norm2(lams));
}

MuValue mu_minus(const Cone& c, double tol) {
  int n = c.dim();
  auto h = [&](double t) { return c.value(ray_point(n, t)); };
  if (h(0.0) >= 0.0) return MuValue::finite(0.0);
  // Scan for the first sign change: linear over [0, 50], then geometric up
  // to the cap.  Dichotomy only needs finite-vs-unbounded beyond the cap.
  double prev = 0.0;
  bool found = false;
  double lo = 0.0, hi = 0.0;
  for (int i = 1; i <= 2000 && !found; ++i) {
    double t = 0.025 * i;
    if (h(t) >= 0.0) {
      lo = prev;
      hi = t;
      found = true;
    }
    prev = t;
  }
  if (!found) {
    double t = 50.0;
    while (t < kMuMax) {
      double next = std::min(t * 1.02, kMuMax);
      if (h(next) >= 0.0) {
        lo = t;
        hi = next;
        found = true;
        break;
      }
      t = next;
    }
  }
  if (!found) return MuValue::infinite();
  for (int iter = 0; iter < 200 && hi - lo > 0.25 * tol; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) >= 0.0) hi = mid;
    else lo = mid;
  }
  return MuValue::finite(0.5 * (lo + hi));
}

ConeConstants cone_constants(const Cone& c, double tol) {
  ConeConstants out;
  out.mu_minus = mu_minus(c, tol);
  int n = c.dim();
  Vec lam_star(n, -1.0);
  lam_star[0] = 1.0;
  out.lambda_star_in_closure =
      cone_status(c, lam_star, tol) != ConeStatus::exterior;
  Vec e_n(n, 0.0);
  e_n[0] = 1.0;  // sorted image of the basis vector
  out.e_n_on_boundary = cone_status(c, e_n, tol) == ConeStatus::boundary;
  return out;
}

double f_eval(const SymFunc& f, const Vec& lams, double tol) {
  require_dim(f.dim(), lams, "f_eval");
  require_sorted_descending(lams, "f_eval");
  if (cone_status(*f.domain(), lams, tol) == ConeStatus::exterior) {
    throw DomainError("eigenvalues lie outside the admissible cone");
  }
  return f.value_unchecked(lams);
}

bool exponent_in_growth_range(double p, const MuValue& mu) {
  if (p < 0.0) return false;
  return mu.unbounded || p < mu.value + 1.0;
}

namespace {

double min_entry_gap(Vec lams) {
  std::sort(lams.begin(), lams.end());
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < lams.size(); ++i) gap = std::min(gap, lams[i + 1] - lams[i]);
  return gap;
}

// Draws a point of the given norm inside the cone, blending a random
// direction toward e for narrow cones.  Returns an empty vector on failure.
Vec draw_interior(Rng& rng, const Cone& c, double r, bool need_gap) {
  int n = c.dim();
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = rng.normal();
  double dn = norm2(d);
  if (dn < 1e-12) return {};
  for (double beta : {1.0, 0.7, 0.4, 0.15}) {
    Vec dir(n);
    for (int i = 0; i < n; ++i) {
      dir[i] = (1.0 - beta) / std::sqrt(static_cast<double>(n)) + beta * d[i] / dn;
    }
    double dirn = norm2(dir);
    if (dirn < 1e-12) continue;
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam[i] = r * dir[i] / dirn;
    if (cone_margin(c, lam) < 1e-6) continue;
    if (need_gap && min_entry_gap(lam) < 1e-3) continue;
    return lam;
  }
  return {};
}

// Distance from an interior point to the cone boundary along -e; the
// defining value is nonincreasing in that direction, so bisection applies.
double boundary_distance_along_e(const Cone& c, const Vec& lam) {
  int n = c.dim();
  auto shifted = [&](double t) {
    Vec s = lam;
    for (int i = 0; i < n; ++i) s[i] -= t;
    return c.value(s);
  };
  if (shifted(0.0) <= 0.0) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (shifted(hi) > 0.0) {
    hi *= 2.0;
    if (++doublings > 60) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (shifted(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi) * std::sqrt(static_cast<double>(n));
}

}  // namespace

ConditionsReport check_conditions(const SymFunc& f, const Cone& c,
                                  int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw ParamError("check_conditions: sample_count must be positive");
  if (f.dim() != c.dim()) throw ParamError("check_conditions: dimension mismatch");
  const int n = f.dim();
  const double inf = std::numeric_limits<double>::infinity();
  Rng rng(seed);

  ConditionsReport rep;
  rep.seed = seed;
  rep.min_partial = inf;
  rep.max_partial = -inf;
  rep.min_norm_on_level = inf;
  rep.level_boundary_distance = inf;
  rep.fitted_degree = std::numeric_limits<double>::quiet_NaN();

  // Shell samples: norm in [0.5, 2], strictly interior, entries separated so
  // finite differences cannot cross a sort tie.
  std::vector<Vec> shell;
  int tries = 0;
  const int max_tries = 400 * sample_count;
  while (static_cast<int>(shell.size()) < sample_count && tries < max_tries) {
    ++tries;
    double r = rng.uniform(0.5, 2.0);
    Vec lam = draw_interior(rng, c, r, /*need_gap=*/true);
    if (!lam.empty()) shell.push_back(std::move(lam));
  }
  rep.samples_used = static_cast<int>(shell.size());

  const double h = 1e-6;
  double deg_num = 0.0, deg_den = 0.0;
  static const double kTGrid[] = {0.5, 0.7, 0.85, 1.25, 1.5, 2.0};
  for (const Vec& lam : shell) {
    for (int i = 0; i < n; ++i) {
      Vec up = lam, dn = lam;
      up[i] += h;
      dn[i] -= h;
      double partial = (f.value_unchecked(up) - f.value_unchecked(dn)) / (2.0 * h);
      rep.min_partial = std::min(rep.min_partial, partial);
      rep.max_partial = std::max(rep.max_partial, partial);
    }
    double base = f.value_unchecked(lam);
    if (base > 0.0) {
      bool usable = true;
      double local_num = 0.0, local_den = 0.0;
      for (double t : kTGrid) {
        Vec scaled = lam;
        for (int i = 0; i < n; ++i) scaled[i] *= t;
        double fv = f.value_unchecked(scaled);
        if (!(fv > 0.0)) {
          usable = false;
          break;
        }
        double x = std::log(t);
        local_num += x * std::log(fv / base);
        local_den += x * x;
      }
      if (usable) {
        deg_num += local_num;
        deg_den += local_den;
      }
    }
  }
  if (deg_den > 0.0) rep.fitted_degree = deg_num / deg_den;

  // Level-set samples: scale homogeneous functions onto f = 1 exactly;
  // otherwise keep band hits |f - 1| <= 0.01 from a wide-norm scatter.
  std::vector<Vec> level;
  if (f.degree() && *f.degree() > 0.0) {
    double d = *f.degree();
    for (const Vec& lam : shell) {
      double fv = f.value_unchecked(lam);
      if (!(fv > 0.0)) continue;
      double scale = std::pow(fv, -1.0 / d);
      Vec scaled = lam;
      for (int i = 0; i < n; ++i) scaled[i] *= scale;
      level.push_back(std::move(scaled));
    }
  }
  tries = 0;
  int hits = 0;
  while (hits < sample_count && tries < max_tries) {
    ++tries;
    double r = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
    Vec lam = draw_interior(rng, c, r, /*need_gap=*/false);
    if (lam.empty()) continue;
    ++hits;
    if (std::fabs(f.value_unchecked(lam) - 1.0) <= 0.01) level.push_back(lam);
  }
  for (const Vec& lam : level) {
    rep.min_norm_on_level = std::min(rep.min_norm_on_level, norm2(lam));
    rep.level_boundary_distance =
        std::min(rep.level_boundary_distance, boundary_distance_along_e(c, lam));
  }
  return rep;
}

}  // namespace confhess
