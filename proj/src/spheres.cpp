#include "confhess/spheres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "confhess/common.hpp"
#include "confhess/hessian.hpp"
#include "confhess/jsonio.hpp"
#include "confhess/mobius.hpp"
#include "confhess/rng.hpp"

namespace confhess {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Roundoff slack when classifying the comparison minimum's sign; grid
// points sitting on the fixed sphere evaluate to zero only up to ulps.
constexpr double kSignSlack = 1e-11;

constexpr double kRigidityTol = 1e-8;

double sq_norm(const Vec& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

BubbleFit fit_bubble(const std::vector<Vec>& points, const Vec& values) {
  if (points.size() != values.size())
    throw InputError("fit_bubble: point and value counts differ");
  if (points.empty()) throw InputError("fit_bubble: no samples");
  const int n = static_cast<int>(points.front().size());
  if (n < 1) throw InputError("fit_bubble: empty points");
  const int cols = n + 2;
  const int m = static_cast<int>(points.size());
  if (m < cols) throw InputError("fit_bubble: need at least n + 2 samples");

  Matrix A(m, cols);
  Vec rhs(m);
  for (int i = 0; i < m; ++i) {
    const Vec& x = points[i];
    if (static_cast<int>(x.size()) != n)
      throw InputError("fit_bubble: inconsistent point dimensions");
    A.at(i, 0) = sq_norm(x);
    for (int d = 0; d < n; ++d) A.at(i, 1 + d) = x[d];
    A.at(i, cols - 1) = 1.0;
    rhs[i] = std::exp(-values[i]);
  }
  Vec cf = least_squares(A, rhs);

  BubbleFit out;
  out.alpha = cf[0];
  out.beta.assign(cf.begin() + 1, cf.begin() + 1 + n);
  out.gamma = cf[cols - 1];

  auto quad = [&](const Vec& x) {
    return out.alpha * sq_norm(x) + dot(out.beta, x) + out.gamma;
  };
  auto linear_residual = [&] {
    double r = 0.0;
    for (int i = 0; i < m; ++i)
      r = std::max(r, std::abs(rhs[i] - quad(points[i])));
    return r;
  };

  if (out.alpha <= 0.0) {
    out.residual = linear_residual();
    return out;
  }
  Vec xbar(n);
  for (int d = 0; d < n; ++d) xbar[d] = -out.beta[d] / (2.0 * out.alpha);
  const double denom = out.gamma - out.alpha * sq_norm(xbar);
  if (denom <= 0.0) {
    out.residual = linear_residual();
    return out;
  }
  out.is_bubble = true;
  out.params.a = 1.0 / denom;
  out.params.b = out.alpha * out.params.a;
  out.params.xbar = std::move(xbar);
  double r = 0.0;
  for (int i = 0; i < m; ++i) {
    // quad > 0 everywhere once alpha > 0 and a > 0, so the log is safe.
    const double v_fit = -std::log(quad(points[i]));
    r = std::max(r, std::abs(values[i] - v_fit));
  }
  out.residual = r;
  return out;
}

GridSpec box_grid(int n, double radius, int res_per_axis, int scatter,
                  std::uint64_t seed) {
  if (n < 1) throw InputError("box_grid: dimension must be positive");
  if (radius <= 0.0) throw ParamError("box_grid: radius must be positive");
  GridSpec g;
  g.lo.assign(n, -radius);
  g.hi.assign(n, radius);
  g.lo[n - 1] = 0.0;
  g.resolution.assign(n, res_per_axis);
  g.scatter = scatter;
  g.seed = seed;
  return g;
}

namespace {

void validate_grid(const GridSpec& spec) {
  const int n = static_cast<int>(spec.lo.size());
  if (n < 1) throw InputError("grid: empty box corner");
  if (static_cast<int>(spec.hi.size()) != n ||
      static_cast<int>(spec.resolution.size()) != n)
    throw InputError("grid: corner and resolution sizes disagree");
  if (spec.hi[n - 1] <= 0.0)
    throw InputError("grid: box misses the upper half space");
  for (int d = 0; d < n; ++d) {
    if (spec.resolution[d] < 2)
      throw InputError("grid: resolution must be at least 2 per axis");
    double lo = spec.lo[d];
    if (d == n - 1) lo = std::max(lo, 0.0);
    if (!(lo < spec.hi[d])) throw InputError("grid: box corners inverted");
  }
  for (const ExcludedBall& ball : spec.excluded) {
    if (static_cast<int>(ball.center.size()) != n)
      throw InputError("grid: excluded ball dimension mismatch");
    if (ball.radius < 0.0)
      throw InputError("grid: excluded ball radius negative");
  }
  if (spec.scatter < 0) throw InputError("grid: scatter count negative");
}

bool excluded_by(const GridSpec& spec, const Vec& p) {
  for (const ExcludedBall& ball : spec.excluded)
    if (dist(p, ball.center) < ball.radius) return true;
  return false;
}

}  // namespace

GridPoints grid_points(const GridSpec& spec) {
  validate_grid(spec);
  const int n = static_cast<int>(spec.lo.size());
  Vec lo = spec.lo;
  lo[n - 1] = std::max(lo[n - 1], 0.0);
  const Vec& hi = spec.hi;
  const bool face = spec.boundary_layer && spec.lo[n - 1] <= 0.0;

  GridPoints out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec p(n);
    for (int d = 0; d < n; ++d) {
      const int r = spec.resolution[d];
      p[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (r - 1);
    }
    if (idx[n - 1] == 0 && lo[n - 1] == 0.0) p[n - 1] = 0.0;  // exact face
    if (!excluded_by(spec, p)) {
      if (p[n - 1] > 0.0)
        out.interior.push_back(p);
      else if (face)
        out.boundary.push_back(p);
    }
    int d = 0;
    while (d < n && ++idx[d] == spec.resolution[d]) idx[d++] = 0;
    if (d == n) break;
  }

  for (int k = 0; k < spec.scatter; ++k) {
    Vec u = halton_point(static_cast<uint64_t>(k), n, spec.seed);
    Vec p(n);
    for (int d = 0; d < n; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * u[d];
    if (p[n - 1] > 0.0 && !excluded_by(spec, p)) out.interior.push_back(p);
  }
  if (face && n >= 2) {
    for (int k = 0; k < spec.scatter / 2; ++k) {
      Vec u = halton_point(static_cast<uint64_t>(k), n - 1, spec.seed + 911);
      Vec p(n, 0.0);
      for (int d = 0; d + 1 < n; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * u[d];
      if (!excluded_by(spec, p)) out.boundary.push_back(p);
    }
  }
  if (out.interior.empty() && out.boundary.empty())
    throw InputError("grid: every point excluded");
  return out;
}

nlohmann::json grid_to_json(const GridSpec& spec) {
  nlohmann::json balls = nlohmann::json::array();
  for (const ExcludedBall& b : spec.excluded)
    balls.push_back({{"center", b.center}, {"radius", b.radius}});
  return nlohmann::json{{"lo", spec.lo},
                        {"hi", spec.hi},
                        {"resolution", spec.resolution},
                        {"excluded", balls},
                        {"scatter", spec.scatter},
                        {"seed", spec.seed},
                        {"boundary_layer", spec.boundary_layer}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("grid: spec must be a JSON object");
  auto vec_field = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array())
      throw InputError(std::string("grid: missing array field '") + key + "'");
    Vec v;
    for (const auto& e : j[key]) {
      if (!e.is_number()) throw InputError("grid: corner entries must be numbers");
      v.push_back(e.get<double>());
    }
    return v;
  };
  GridSpec g;
  g.lo = vec_field("lo");
  g.hi = vec_field("hi");
  if (!j.contains("resolution") || !j["resolution"].is_array())
    throw InputError("grid: missing array field 'resolution'");
  for (const auto& e : j["resolution"]) {
    if (!e.is_number_integer())
      throw InputError("grid: resolution entries must be integers");
    g.resolution.push_back(e.get<int>());
  }
  if (j.contains("excluded")) {
    if (!j["excluded"].is_array()) throw InputError("grid: excluded must be an array");
    for (const auto& e : j["excluded"]) {
      ExcludedBall ball;
      if (!e.is_object() || !e.contains("center") || !e.contains("radius"))
        throw InputError("grid: excluded balls need center and radius");
      for (const auto& c : e["center"]) ball.center.push_back(c.get<double>());
      ball.radius = e["radius"].get<double>();
      g.excluded.push_back(std::move(ball));
    }
  }
  if (j.contains("scatter")) g.scatter = j["scatter"].get<int>();
  if (j.contains("seed")) g.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("boundary_layer")) g.boundary_layer = j["boundary_layer"].get<bool>();
  validate_grid(g);
  return g;
}

GridSpec load_grid_file(const std::string& path) {
  return grid_from_json(parse_json_file(path));
}

namespace {

// min of v - v_{x,lam} over the usable points; +inf when none remain.
// filter drops points inside B_lam(x), otherwise they are an error.
double comparison_over(const FieldPtr& v, const Vec& x, double lam,
                       const std::vector<Vec>& pts, bool filter) {
  FieldPtr vk = kelvin(v, x, lam);
  double best = kInf;
  for (const Vec& y : pts) {
    if (dist(y, x) < lam * (1.0 - 1e-12)) {
      if (filter) continue;
      throw InputError("sphere_comparison: grid overlaps the comparison ball");
    }
    best = std::min(best, v->value(y) - vk->value(y));
  }
  return best;
}

std::vector<Vec> all_points(const GridSpec& grid) {
  GridPoints gp = grid_points(grid);
  std::vector<Vec> pts = std::move(gp.interior);
  pts.insert(pts.end(), gp.boundary.begin(), gp.boundary.end());
  return pts;
}

}  // namespace

double sphere_comparison(const FieldPtr& v, const Vec& x, double lam,
                         const GridSpec& grid) {
  std::vector<Vec> pts = all_points(grid);
  double m = comparison_over(v, x, lam, pts, false);
  if (!std::isfinite(m))
    throw InputError("sphere_comparison: grid has no usable points");
  return m;
}

MuValue critical_lambda(const FieldPtr& v, const Vec& x, const GridSpec& grid,
                        double tol) {
  if (!(tol > 0.0) || tol >= 1.0)
    throw ParamError("critical_lambda: tol must lie in (0, 1)");
  std::vector<Vec> pts = all_points(grid);
  auto holds = [&](double lam) {
    return comparison_over(v, x, lam, pts, true) >= -kSignSlack;
  };

  if (!holds(tol))
    throw DomainError(
        "critical_lambda: comparison fails at the lower bracket on this grid");

  // Upward scan for the first failing radius.
  double lo = tol, hi = 0.0;
  bool found = false;
  for (double lam = tol * 1.05; !found; lam *= 1.05) {
    if (lam >= kLambdaMax) lam = kLambdaMax;
    if (holds(lam)) {
      lo = lam;
      if (lam == kLambdaMax) return MuValue::infinite();
    } else {
      hi = lam;
      found = true;
    }
  }

  for (int attempt = 0; attempt < 5; ++attempt) {
    while (hi - lo > tol * std::max(1.0, lo)) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    const double lam_c = 0.5 * (lo + hi);
    // Grazing-contact safeguard: the crossing must be clean on both sides.
    const bool below_ok = holds(lam_c * (1.0 - 1e-4));
    const bool above_fails = !holds(lam_c * (1.0 + 1e-4));
    if (below_ok && above_fails) return MuValue::finite(lam_c);
    if (!below_ok) {
      hi = lam_c * (1.0 - 1e-4);
      lo = tol;
    } else {
      // Spurious touch; rescan above it.
      double lam = lam_c * (1.0 + 1e-4);
      lo = lam;
      bool refound = false;
      for (lam *= 1.05; !refound; lam *= 1.05) {
        if (lam >= kLambdaMax) lam = kLambdaMax;
        if (holds(lam)) {
          lo = lam;
          if (lam == kLambdaMax) return MuValue::infinite();
        } else {
          hi = lam;
          refound = true;
        }
      }
    }
  }
  throw NumericError("critical_lambda: grazing contact at the critical radius");
}

double bubble_critical_lambda(const BubbleParams& p, const Vec& x) {
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw ParamError("bubble_critical_lambda: a and b must be positive");
  if (p.xbar.size() != x.size())
    throw InputError("bubble_critical_lambda: dimension mismatch");
  double d2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = p.xbar[i] - x[i];
    d2 += d * d;
  }
  return std::sqrt((1.0 + p.b * d2) / p.b);
}

nlohmann::json verify_report_to_json(const VerifyReport& r) {
  return nlohmann::json{{"interior_residual_max", r.interior_residual_max},
                        {"boundary_residual_max", r.boundary_residual_max},
                        {"cone_margin_min", r.cone_margin_min},
                        {"pass", r.pass},
                        {"grid", r.grid},
                        {"seed", r.seed}};
}

VerifyReport residual_check(const FieldPtr& v, const SymFunc& f,
                            const Cone& cone, double p_exp, double bc,
                            const GridSpec& grid, std::optional<double> tol) {
  if (!v) throw InputError("residual_check: null field");
  const int n = v->dim();
  if (f.dim() != n || cone.dim() != n)
    throw InputError("residual_check: dimension mismatch between field, f, cone");
  const double eps = tol ? *tol : (v->has_analytic_jets() ? 1e-8 : 1e-4);

  GridPoints pts = grid_points(grid);
  VerifyReport rep;
  rep.grid = grid_to_json(grid);
  rep.seed = grid.seed;
  rep.cone_margin_min = kInf;
  for (const Vec& y : pts.interior) {
    const Jet jet = v->best_jet(y);
    const Vec lams = eigenvalues_of_jet(jet);
    rep.cone_margin_min = std::min(rep.cone_margin_min, cone_margin(cone, lams));
    const double res =
        std::abs(f.value_unchecked(lams) - std::exp(-p_exp * jet.value));
    rep.interior_residual_max = std::max(rep.interior_residual_max, res);
  }
  for (const Vec& y : pts.boundary) {
    const Jet jet = v->best_jet(y);
    const double res =
        std::abs(jet.gradient[n - 1] - bc * std::exp(jet.value));
    rep.boundary_residual_max = std::max(rep.boundary_residual_max, res);
  }
  if (!std::isfinite(rep.cone_margin_min)) rep.cone_margin_min = 0.0;
  rep.pass = rep.interior_residual_max <= eps &&
             rep.boundary_residual_max <= eps && rep.cone_margin_min >= -1e-9;
  return rep;
}

RigidityReport rigidity_check(const FieldPtr& v, const SymFunc& f,
                              const Cone& cone, double bc,
                              const GridSpec& grid) {
  if (!v) throw InputError("rigidity_check: null field");
  const int n = v->dim();
  if (f.dim() != n || cone.dim() != n)
    throw InputError("rigidity_check: dimension mismatch between field, f, cone");
  GridPoints gp = grid_points(grid);
  std::vector<Vec> pts = std::move(gp.interior);
  pts.insert(pts.end(), gp.boundary.begin(), gp.boundary.end());
  Vec vals(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = v->value(pts[i]);

  RigidityReport rep;
  rep.fit = fit_bubble(pts, vals);
  if (!rep.fit.is_bubble) return rep;
  const double a = rep.fit.params.a, b = rep.fit.params.b;
  const Vec ray(n, 2.0 * b / (a * a));
  rep.f_gap = std::abs(f.value_unchecked(ray) - 1.0);
  rep.boundary_gap = std::abs(2.0 * (b / a) * rep.fit.params.xbar[n - 1] - bc);
  rep.ray_margin = cone_margin(cone, ray);
  rep.pass = rep.f_gap <= kRigidityTol && rep.boundary_gap <= kRigidityTol;
  return rep;
}

CounterexampleKind counterexample_kind_from_name(const std::string& name) {
  if (name == "log_power") return CounterexampleKind::log_power;
  if (name == "boundary_drift") return CounterexampleKind::boundary_drift;
  if (name == "barrier") return CounterexampleKind::barrier;
  if (name == "xn_only") return CounterexampleKind::xn_only;
  if (name == "aux_quadratic") return CounterexampleKind::aux_quadratic;
  throw InputError("unknown counterexample kind: " + name);
}

const char* to_string(CounterexampleKind kind) {
  switch (kind) {
    case CounterexampleKind::log_power: return "log_power";
    case CounterexampleKind::boundary_drift: return "boundary_drift";
    case CounterexampleKind::barrier: return "barrier";
    case CounterexampleKind::xn_only: return "xn_only";
    case CounterexampleKind::aux_quadratic: return "aux_quadratic";
  }
  return "?";
}

namespace {

// Random point at |p - about| in [r_lo, r_hi]; upper_half resamples the
// direction until the point has nonnegative last coordinate.
Vec annulus_point(Rng& rng, int n, const Vec& about, double r_lo, double r_hi,
                  bool upper_half) {
  for (;;) {
    Vec dir(n);
    double nn = 0.0;
    for (int d = 0; d < n; ++d) {
      dir[d] = rng.normal();
      nn += dir[d] * dir[d];
    }
    if (nn < 1e-12) continue;
    const double r = rng.uniform(r_lo, r_hi) / std::sqrt(nn);
    Vec p(n);
    for (int d = 0; d < n; ++d) p[d] = about[d] + r * dir[d];
    if (!upper_half || p[n - 1] >= 0.0) return p;
  }
}

// Boundary point with |p'| in [r_lo, r_hi] and p_n = 0 exactly.
Vec boundary_ring_point(Rng& rng, int n, double r_lo, double r_hi) {
  for (;;) {
    Vec p(n, 0.0);
    double nn = 0.0;
    for (int d = 0; d + 1 < n; ++d) {
      p[d] = rng.normal();
      nn += p[d] * p[d];
    }
    if (nn < 1e-12) continue;
    const double r = rng.uniform(r_lo, r_hi) / std::sqrt(nn);
    for (int d = 0; d + 1 < n; ++d) p[d] *= r;
    return p;
  }
}

nlohmann::json annulus_grid_json(const Vec& about, double r_lo, double r_hi,
                                 int samples, double band_lo, double band_hi) {
  return nlohmann::json{{"kind", "annulus"},
                        {"about", about},
                        {"radius", {r_lo, r_hi}},
                        {"boundary_band", {band_lo, band_hi}},
                        {"samples", samples}};
}

}  // namespace

CounterexampleResult counterexample(CounterexampleKind kind,
                                    const CounterexampleParams& prm) {
  if (prm.samples < 1) throw ParamError("counterexample: samples must be positive");
  CounterexampleResult out;
  VerifyReport& rep = out.report;
  rep.seed = prm.seed;
  rep.cone_margin_min = kInf;

  switch (kind) {
    case CounterexampleKind::log_power: {
      const int n = prm.dim > 0 ? prm.dim : 3;
      if (!(prm.alpha > 0.0))
        throw ParamError("counterexample: log_power needs alpha > 0");
      out.field = make_log_power(n, prm.alpha);
      ConePtr cone = prm.cone ? prm.cone : make_gamma_k_cone(n, 1);
      if (cone->dim() != n) throw InputError("counterexample: cone dimension mismatch");
      Rng rng(prm.seed ^ 0x6c6f67ULL);
      const double r_lo = 0.5, r_hi = 2.0;
      const Vec origin(n, 0.0);
      for (int s = 0; s < prm.samples; ++s) {
        const Vec x = annulus_point(rng, n, origin, r_lo, r_hi, false);
        const Jet jet = out.field->best_jet(x);
        const Vec lams = eigenvalues_of_jet(jet);
        const double r = std::sqrt(sq_norm(x));
        const double fac = prm.alpha * (prm.alpha + 2.0) /
                           (2.0 * std::pow(r, 2.0 * prm.alpha + 2.0));
        double dev = 0.0;
        for (int i = 0; i < n; ++i) {
          const double want = (i == 0 ? fac : -fac);
          dev = std::max(dev, std::abs(lams[i] - want));
        }
        rep.interior_residual_max =
            std::max(rep.interior_residual_max, dev / std::max(1.0, fac));
        rep.cone_margin_min = std::min(rep.cone_margin_min, cone_margin(*cone, lams));
      }
      if (n >= 2) {
        for (int s = 0; s < prm.samples; ++s) {
          const Vec x = boundary_ring_point(rng, n, r_lo, r_hi);
          const Jet jet = out.field->best_jet(x);
          rep.boundary_residual_max =
              std::max(rep.boundary_residual_max,
                       std::abs(boundary_value(jet, BoundaryConvention::neumann)));
        }
      }
      rep.grid = annulus_grid_json(origin, r_lo, r_hi, prm.samples, r_lo, r_hi);
      rep.pass = rep.interior_residual_max <= 1e-8 &&
                 rep.boundary_residual_max <= 1e-8;
      out.summary =
          "spectrum sits on the mixed ray with a positive factor and the "
          "boundary slope datum vanishes";
      break;
    }
    case CounterexampleKind::boundary_drift: {
      const int n = prm.dim > 0 ? prm.dim : 3;
      if (!(prm.alpha > 0.0))
        throw ParamError("counterexample: boundary_drift needs alpha > 0");
      if (!(prm.c < 0.0))
        throw ParamError("counterexample: boundary_drift needs c < 0");
      out.field = make_log_power_drift(n, prm.alpha, prm.c);
      ConePtr cone = prm.cone ? prm.cone : make_affine_cone(n, 0.5);
      if (cone->dim() != n) throw InputError("counterexample: cone dimension mismatch");
      Rng rng(prm.seed ^ 0x64726966ULL);
      const double r_lo = 0.05, r_hi = 0.3;
      const Vec origin(n, 0.0);
      for (int s = 0; s < prm.samples; ++s) {
        const Vec x = annulus_point(rng, n, origin, r_lo, r_hi, true);
        const Vec lams = eigenvalues_of_jet(out.field->best_jet(x));
        const double margin = cone_margin(*cone, lams);
        rep.cone_margin_min = std::min(rep.cone_margin_min, margin);
        rep.interior_residual_max =
            std::max(rep.interior_residual_max, std::max(0.0, -margin));
      }
      for (int s = 0; s < prm.samples; ++s) {
        const Vec x = boundary_ring_point(rng, n, r_lo, r_hi);
        const Jet jet = out.field->best_jet(x);
        const double gap = jet.gradient[n - 1] - prm.c * std::exp(jet.value);
        rep.boundary_residual_max =
            std::max(rep.boundary_residual_max, std::max(0.0, gap));
      }
      rep.grid = annulus_grid_json(origin, r_lo, r_hi, prm.samples, r_lo, r_hi);
      rep.pass = rep.interior_residual_max <= 1e-12 &&
                 rep.boundary_residual_max <= 1e-12 && rep.cone_margin_min > 0.0;
      out.summary =
          "spectrum stays inside the cone near the origin while the boundary "
          "slope stays below c e^v";
      break;
    }
    case CounterexampleKind::barrier: {
      const int n = prm.dim > 0 ? prm.dim : 4;
      if (!(prm.mu > 1.0)) throw ParamError("counterexample: barrier needs mu > 1");
      if (!(prm.delta > 0.0) || !(prm.eps > 0.0))
        throw ParamError("counterexample: barrier needs delta > 0 and eps > 0");
      out.field = make_barrier(n, prm.mu, prm.delta, prm.eps);
      ConePtr cone = prm.cone ? prm.cone : make_min_mu_cone(n, 3.0);
      if (cone->dim() != n) throw InputError("counterexample: cone dimension mismatch");
      const double outer = barrier_outer_radius(prm.mu, prm.delta);
      const double r_lo = 3.0, r_hi = 0.995 * outer;
      if (!(r_lo < r_hi))
        throw ParamError("counterexample: barrier annulus is empty; shrink delta");
      Rng rng(prm.seed ^ 0x62617272ULL);
      Vec about(n, 0.0);
      about[n - 1] = 1.0;
      double margin_max = -kInf;
      for (int s = 0; s < prm.samples; ++s) {
        const Vec x = annulus_point(rng, n, about, r_lo, r_hi, true);
        const Vec lams = eigenvalues_of_jet(out.field->best_jet(x));
        const double fac = lams[0] / prm.mu;
        double dev = 0.0;
        for (int i = 0; i < n; ++i) {
          const double want = (i == 0 ? prm.mu : -1.0) * fac;
          dev = std::max(dev, std::abs(lams[i] - want));
        }
        rep.interior_residual_max = std::max(
            rep.interior_residual_max, dev / std::max(1.0, std::abs(fac) * prm.mu));
        const double margin = cone_margin(*cone, lams);
        rep.cone_margin_min = std::min(rep.cone_margin_min, margin);
        margin_max = std::max(margin_max, margin);
      }
      rep.grid = annulus_grid_json(about, r_lo, r_hi, prm.samples, 0.0, 0.0);
      rep.pass = rep.interior_residual_max <= 1e-8 && margin_max < 0.0;
      out.summary =
          "spectrum stays on the (mu, -1, ..., -1) ray and exterior to the "
          "cone across the annulus";
      break;
    }
    case CounterexampleKind::xn_only: {
      const int n = prm.dim > 0 ? prm.dim : 3;
      if (!(prm.mu > 1.0)) throw ParamError("counterexample: xn_only needs mu > 1");
      out.field = make_one_var_min_f(n, prm.mu, prm.c);
      SymFuncPtr f = make_min_mu_shifted_func(n, prm.mu);
      ConePtr cone = prm.cone ? prm.cone : make_min_mu_cone(n, prm.mu);
      if (cone->dim() != n) throw InputError("counterexample: cone dimension mismatch");
      GridSpec grid = prm.grid ? *prm.grid : box_grid(n, 2.0, 5, 40, prm.seed);
      out.report = residual_check(out.field, *f, *cone, 0.0, prm.c, grid);
      out.summary =
          "one-variable profile solves the shifted min equation with its "
          "boundary slope datum";
      break;
    }
    case CounterexampleKind::aux_quadratic: {
      const int n = prm.dim > 0 ? prm.dim : 3;
      if (!(prm.alpha > 0.0))
        throw ParamError("counterexample: aux_quadratic needs alpha > 0");
      const double tau = 5.0 * prm.dtilde * prm.dtilde;
      Vec drift(n, 0.0);
      drift[n - 1] = prm.dtilde;
      out.field = make_sum({make_log_power(n, prm.alpha),
                            make_affine(n, drift, 0.0),
                            make_quadratic(n, scaled(tau, Matrix::identity(n)),
                                           Vec(n, 0.0), 0.0)});
      ConePtr cone = prm.cone ? prm.cone : make_gamma_k_cone(n, 1);
      if (cone->dim() != n) throw InputError("counterexample: cone dimension mismatch");
      Rng rng(prm.seed ^ 0x617578ULL);
      const double r_lo = 0.02, r_hi = 0.15;
      const Vec origin(n, 0.0);
      double margin_max = -kInf;
      for (int s = 0; s < prm.samples; ++s) {
        const Vec x = annulus_point(rng, n, origin, r_lo, r_hi, true);
        const double margin =
            cone_margin(*cone, eigenvalues_of_jet(out.field->best_jet(x)));
        rep.cone_margin_min = std::min(rep.cone_margin_min, margin);
        margin_max = std::max(margin_max, margin);
        rep.interior_residual_max =
            std::max(rep.interior_residual_max, std::max(0.0, margin));
      }
      rep.grid = annulus_grid_json(origin, r_lo, r_hi, prm.samples, 0.0, 0.0);
      rep.pass = margin_max < 0.0;
      out.summary =
          "log singularity with drift and quadratic term stays exterior to "
          "the cone near the origin";
      break;
    }
  }
  if (!std::isfinite(out.report.cone_margin_min)) out.report.cone_margin_min = 0.0;
  return out;
}

}  // namespace confhess
