#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confhess/common.hpp"
#include "confhess/cones.hpp"
#include "confhess/field.hpp"
#include "confhess/hessian.hpp"
#include "confhess/jsonio.hpp"
#include "confhess/mobius.hpp"
#include "confhess/ode.hpp"
#include "confhess/rng.hpp"
#include "confhess/spheres.hpp"

namespace {

using namespace confhess;
using nlohmann::json;

// Comma-separated doubles, e.g. "0,0,1".
Vec parse_list(const std::string& text) {
  Vec out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw InputError("bad number in list: '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw InputError("bad number in list: '" + tok + "'");
    out.push_back(x);
  }
  if (out.empty()) throw InputError("empty number list");
  return out;
}

// "unbounded" or a number.
struct MaybeUnbounded {
  bool unbounded = false;
  double value = 0.0;
};

MaybeUnbounded parse_maybe_unbounded(const std::string& text) {
  if (text == "unbounded") return {true, 0.0};
  Vec v = parse_list(text);
  if (v.size() != 1) throw InputError("expected one number or 'unbounded'");
  return {false, v[0]};
}

json mu_to_json(const MuValue& mu) {
  if (mu.unbounded) return "unbounded";
  return mu.value;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shared output flags; every subcommand report goes through emit().
struct Output {
  std::string out_path;
  bool no_timestamp = false;

  void attach(CLI::App* sub) {
    sub->add_option("--out", out_path, "write the JSON report (ode: CSV) to this path");
    sub->add_flag("--no-timestamp", no_timestamp, "omit the generation timestamp");
  }

  int emit(const std::string& command, json settings, json report, bool pass,
           bool write_out = true) const {
    json j{{"command", command},
           {"settings", std::move(settings)},
           {"report", std::move(report)},
           {"pass", pass}};
    if (!no_timestamp) j["generated_at"] = iso_timestamp();
    const std::string text = dump_json(j);
    std::cout << text;
    if (write_out && !out_path.empty()) write_text_atomic(out_path, text);
    return pass ? 0 : 1;
  }
};

Matrix gram_schmidt_orthogonal(Rng& rng, int n) {
  Matrix Q(n, n);
  for (int j = 0; j < n; ++j) {
    Vec col(n);
    for (int i = 0; i < n; ++i) col[i] = rng.normal();
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int i = 0; i < n; ++i) proj += Q.at(i, k) * col[i];
      for (int i = 0; i < n; ++i) col[i] -= proj * Q.at(i, k);
    }
    const double nrm = norm2(col);
    for (int i = 0; i < n; ++i) Q.at(i, j) = col[i] / nrm;
  }
  return Q;
}

MobiusMap random_map(Rng& rng, int n) {
  MobiusMap m{n, {}};
  const int k = rng.uniform_int(1, 3);
  for (int i = 0; i < k; ++i) {
    switch (rng.uniform_int(0, 3)) {
      case 0: m.atoms.push_back(Translation{rng.uniform_vec(n, -1.0, 1.0)}); break;
      case 1: m.atoms.push_back(Dilation{rng.uniform(0.4, 2.5)}); break;
      case 2: m.atoms.push_back(Orthogonal{gram_schmidt_orthogonal(rng, n)}); break;
      default:
        m.atoms.push_back(Inversion{rng.uniform_vec(n, -1.0, 1.0), rng.uniform(0.6, 1.8)});
    }
  }
  return m;
}

// Max sorted-spectrum gap between the pulled-back field at y and the base
// field at the image point, over seeded random maps and points.
double invariance_gap(const FieldPtr& v, int samples, std::uint64_t seed) {
  const int n = v->dim();
  Rng rng(seed);
  double worst = 0.0;
  int done = 0, tries = 0;
  while (done < samples) {
    if (++tries > 200 * samples)
      throw NumericError("invariance: could not place sample points in the domain");
    MobiusMap m = random_map(rng, n);
    Vec y = rng.uniform_vec(n, -2.0, 2.0);
    try {
      MPoint image = mobius_apply(m, y);
      if (image.infinite) continue;
      FieldPtr pulled = pushforward(v, m);
      Vec a = eigenvalues_of_jet(pulled->best_jet(y));
      Vec b = eigenvalues_of_jet(v->best_jet(image.x));
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
      ++done;
    } catch (const DomainError&) {
      continue;  // orbit hit a singular locus; resample
    }
  }
  return worst;
}

GridSpec resolve_grid(const std::string& path, int n, std::uint64_t seed,
                      double radius, int res, int scatter) {
  if (!path.empty()) return load_grid_file(path);
  return box_grid(n, radius, res, scatter, seed);
}

json bubble_fit_json(const BubbleFit& fit) {
  json j{{"is_bubble", fit.is_bubble}, {"residual", fit.residual}};
  if (fit.is_bubble) {
    j["a"] = fit.params.a;
    j["b"] = fit.params.b;
    j["xbar"] = fit.params.xbar;
  }
  return j;
}

struct Args {
  // Shared numeric flags; each subcommand reads the ones it declares.
  std::string field_path, f_name, cone_name, grid_path, point_text, lams_text;
  std::string expect_text, expect_mu_text, kind_text;
  double mu = 3.0, p_exp = 0.0, c = 0.0, v0 = 0.0, w0 = 0.0, tmax = 50.0;
  double lam = 0.0, alpha = 1.0, delta = 0.01, eps = 1.0, dtilde = 0.1;
  double expect_degree = 0.0;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int dim = 3, samples = 0;
  bool inverse = false;

  Output out;
};

double tol_or(const Args& a, double dflt) { return a.tol ? *a.tol : dflt; }

int run_eig(const Args& a, bool has_expect) {
  FieldPtr v = make_field(load_field_spec(a.field_path));
  Vec point = parse_list(a.point_text);
  if (static_cast<int>(point.size()) != v->dim())
    throw InputError("point dimension does not match the field");
  const Jet jet = v->best_jet(point);
  Vec lams = eigenvalues_of_jet(jet);
  const double tol = tol_or(a, 1e-9);

  bool pass = true;
  json report{{"point", point},
              {"value", jet.value},
              {"eigenvalues", lams},
              {"method", v->has_analytic_jets() ? "analytic" : "finite_difference"}};
  if (has_expect) {
    Vec want = parse_list(a.expect_text);
    if (want.size() != lams.size()) throw InputError("--expect length mismatch");
    double gap = 0.0;
    for (size_t i = 0; i < lams.size(); ++i) gap = std::max(gap, std::abs(lams[i] - want[i]));
    report["expect_gap"] = gap;
    pass = gap <= tol;
  }
  return a.out.emit("eig", json{{"tol", tol}}, report, pass);
}

int run_invariance(const Args& a) {
  FieldPtr v = make_field(load_field_spec(a.field_path));
  const int samples = a.samples > 0 ? a.samples : 20;
  const double tol = tol_or(a, 1e-9);
  const double gap = invariance_gap(v, samples, a.seed);
  json report{{"samples", samples}, {"max_gap", gap}};
  return a.out.emit("invariance", json{{"tol", tol}, {"seed", a.seed}}, report, gap <= tol);
}

int run_cone(const Args& a, bool has_point, bool has_expect_mu) {
  ConePtr cone = cone_from_name(a.cone_name, a.dim);
  const double tol = tol_or(a, 1e-8);
  ConeConstants cc = cone_constants(*cone, tol);
  json report{{"name", cone->name()},
              {"dim", cone->dim()},
              {"mu_minus", mu_to_json(cc.mu_minus)},
              {"lambda_star_in_closure", cc.lambda_star_in_closure},
              {"e_n_on_boundary", cc.e_n_on_boundary}};
  if (has_point) {
    Vec lams = parse_list(a.point_text);
    report["status"] = to_string(cone_status(*cone, lams));
    report["margin"] = cone_margin(*cone, lams);
  }
  bool pass = true;
  if (has_expect_mu) {
    MaybeUnbounded want = parse_maybe_unbounded(a.expect_mu_text);
    if (want.unbounded != cc.mu_minus.unbounded)
      pass = false;
    else if (!want.unbounded)
      pass = std::abs(want.value - cc.mu_minus.value) <= tol;
  }
  return a.out.emit("cone", json{{"tol", tol}}, report, pass);
}

int run_conditions(const Args& a, bool has_cone, bool has_expect_degree) {
  SymFuncPtr f = symfunc_from_name(a.f_name, a.dim);
  ConePtr cone = has_cone ? cone_from_name(a.cone_name, a.dim) : f->domain();
  const int samples = a.samples > 0 ? a.samples : 200;
  ConditionsReport cr = check_conditions(*f, *cone, samples, a.seed);
  json report{{"min_partial", cr.min_partial},
              {"max_partial", cr.max_partial},
              {"min_norm_on_level", cr.min_norm_on_level},
              {"fitted_degree", cr.fitted_degree},
              {"level_boundary_distance", cr.level_boundary_distance},
              {"samples_used", cr.samples_used},
              {"seed", cr.seed}};
  bool pass = true;
  const double tol = tol_or(a, 1e-6);
  if (has_expect_degree) {
    report["expect_degree_gap"] = std::abs(cr.fitted_degree - a.expect_degree);
    pass = std::abs(cr.fitted_degree - a.expect_degree) <= tol;
  }
  return a.out.emit("conditions", json{{"tol", tol}, {"seed", a.seed}, {"samples", samples}},
                    report, pass);
}

int run_ode(const Args& a, bool general, bool has_cone, bool has_expect) {
  OdeTrajectory traj;
  if (general) {
    SymFuncPtr f = symfunc_from_name(a.f_name, a.dim);
    ConePtr cone = has_cone ? cone_from_name(a.cone_name, a.dim) : f->domain();
    traj = integrate_general(*f, *cone, a.p_exp, a.c, a.v0, a.tmax);
  } else {
    traj = integrate_model(make_ode_params(a.mu, a.p_exp), a.v0, a.w0, a.tmax);
  }
  json report = trajectory_sidecar_json(traj);
  if (!a.out.out_path.empty()) {
    write_text_atomic(a.out.out_path, trajectory_csv_text(traj));
    write_text_atomic(a.out.out_path + ".json", dump_json(report));
  }
  bool pass = true;
  if (has_expect) pass = a.expect_text == to_string(traj.classification);
  json settings{{"tmax", a.tmax}, {"v0", a.v0}};
  if (general) {
    settings["p"] = a.p_exp;
    settings["bc"] = a.c;
  } else {
    settings["mu"] = a.mu;
    settings["p"] = a.p_exp;
    settings["w0"] = a.w0;
  }
  return a.out.emit("ode", settings, report, pass, /*write_out=*/false);
}

int run_threshold(const Args& a, bool has_expect) {
  const double th = threshold_w0(a.mu, a.p_exp, a.v0);
  const double tol = tol_or(a, 1e-9);
  bool pass = true;
  json report{{"threshold_w0", th}};
  if (has_expect) {
    Vec want = parse_list(a.expect_text);
    if (want.size() != 1) throw InputError("--expect takes one number here");
    report["expect_gap"] = std::abs(th - want[0]);
    pass = std::abs(th - want[0]) <= tol;
  }
  return a.out.emit("threshold",
                    json{{"mu", a.mu}, {"p", a.p_exp}, {"v0", a.v0}, {"tol", tol}}, report,
                    pass);
}

int run_spheres(const Args& a, bool has_lam, bool has_expect) {
  FieldPtr v = make_field(load_field_spec(a.field_path));
  Vec x = parse_list(a.point_text);
  if (static_cast<int>(x.size()) != v->dim())
    throw InputError("center dimension does not match the field");
  GridSpec grid = resolve_grid(a.grid_path, v->dim(), a.seed, 20.0, 5, 150);
  const double tol = tol_or(a, 1e-8);
  json settings{{"tol", tol}, {"seed", grid.seed}};

  if (has_lam) {
    if (a.grid_path.empty()) grid.excluded.push_back(ExcludedBall{x, a.lam});
    const double m = sphere_comparison(v, x, a.lam, grid);
    json report{{"lam", a.lam},
                {"comparison_min", m},
                {"holds", m >= -1e-11},
                {"grid", grid_to_json(grid)}};
    return a.out.emit("spheres", settings, report, m >= -1e-11);
  }

  json report{{"grid", grid_to_json(grid)}};
  bool pass = true;
  try {
    MuValue lam = critical_lambda(v, x, grid, tol);
    report["critical_lambda"] = mu_to_json(lam);
    if (has_expect) {
      MaybeUnbounded want = parse_maybe_unbounded(a.expect_text);
      if (want.unbounded != lam.unbounded)
        pass = false;
      else if (!want.unbounded)
        pass = std::abs(want.value - lam.value) <= 1e-5;
    }
  } catch (const DomainError& e) {
    report["starting_violation"] = true;
    report["error"] = e.what();
    pass = false;
  }
  return a.out.emit("spheres", settings, report, pass);
}

int run_rigidity(const Args& a) {
  FieldPtr v = make_field(load_field_spec(a.field_path));
  const int n = v->dim();
  SymFuncPtr f = symfunc_from_name(a.f_name, n);
  ConePtr cone = cone_from_name(a.cone_name, n);
  GridSpec grid = resolve_grid(a.grid_path, n, a.seed, 2.0, 4, 40);

  VerifyReport res = residual_check(v, *f, *cone, a.p_exp, a.c, grid, a.tol);
  RigidityReport rig = rigidity_check(v, *f, *cone, a.c, grid);
  json report{{"residual", verify_report_to_json(res)},
              {"rigidity",
               json{{"fit", bubble_fit_json(rig.fit)},
                    {"f_gap", rig.f_gap},
                    {"boundary_gap", rig.boundary_gap},
                    {"ray_margin", rig.ray_margin},
                    {"pass", rig.pass}}}};
  const bool pass = res.pass && rig.pass;
  return a.out.emit("rigidity",
                    json{{"p", a.p_exp}, {"bc", a.c}, {"seed", grid.seed}}, report, pass);
}

int run_counterexample(const Args& a, const CLI::App* sub) {
  CounterexampleKind kind = counterexample_kind_from_name(a.kind_text);
  CounterexampleParams prm;
  if (sub->count("--dim")) prm.dim = a.dim;
  prm.alpha = a.alpha;
  prm.mu = a.mu;
  if (sub->count("--c")) prm.c = a.c;
  prm.delta = a.delta;
  prm.eps = a.eps;
  prm.dtilde = a.dtilde;
  prm.seed = a.seed;
  if (a.samples > 0) prm.samples = a.samples;
  const int dim_used = prm.dim > 0 ? prm.dim
                       : (kind == CounterexampleKind::barrier ? 4 : 3);
  if (!a.cone_name.empty()) prm.cone = cone_from_name(a.cone_name, dim_used);
  if (!a.grid_path.empty()) prm.grid = load_grid_file(a.grid_path);

  CounterexampleResult res = counterexample(kind, prm);
  json report{{"kind", to_string(kind)},
              {"summary", res.summary},
              {"report", verify_report_to_json(res.report)}};
  return a.out.emit("counterexample", json{{"seed", prm.seed}, {"samples", prm.samples}},
                    report, res.report.pass);
}

int run_residual(const Args& a) {
  FieldPtr v = make_field(load_field_spec(a.field_path));
  const int n = v->dim();
  SymFuncPtr f = symfunc_from_name(a.f_name, n);
  ConePtr cone = cone_from_name(a.cone_name, n);
  GridSpec grid = resolve_grid(a.grid_path, n, a.seed, 2.0, 4, 40);
  VerifyReport rep = residual_check(v, *f, *cone, a.p_exp, a.c, grid, a.tol);
  const double tol_used = a.tol ? *a.tol : (v->has_analytic_jets() ? 1e-8 : 1e-4);
  return a.out.emit("residual", json{{"p", a.p_exp}, {"bc", a.c}, {"tol", tol_used}},
                    verify_report_to_json(rep), rep.pass);
}

int run_ricci(const Args& a, bool from_field, bool has_expect) {
  Vec lams;
  json input;
  if (from_field) {
    FieldPtr v = make_field(load_field_spec(a.field_path));
    Vec point = parse_list(a.point_text);
    if (static_cast<int>(point.size()) != v->dim())
      throw InputError("point dimension does not match the field");
    lams = eigenvalues_of_jet(v->best_jet(point));
    input = json{{"point", point}, {"eigenvalues", lams}};
  } else {
    lams = parse_list(a.lams_text);
    input = json{{"eigenvalues", lams}};
  }
  const RicciDirection dir =
      a.inverse ? RicciDirection::ricci_to_schouten : RicciDirection::schouten_to_ricci;
  Vec mapped = ricci_transform(lams, dir);
  const double tol = tol_or(a, 1e-9);
  bool pass = true;
  json report{{"input", input},
              {"direction", a.inverse ? "ricci_to_schouten" : "schouten_to_ricci"},
              {"output", mapped}};
  if (has_expect) {
    Vec want = parse_list(a.expect_text);
    if (want.size() != mapped.size()) throw InputError("--expect length mismatch");
    double gap = 0.0;
    for (size_t i = 0; i < mapped.size(); ++i)
      gap = std::max(gap, std::abs(mapped[i] - want[i]));
    report["expect_gap"] = gap;
    pass = gap <= tol;
  }
  return a.out.emit("ricci", json{{"tol", tol}}, report, pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal Hessian toolkit: spectra, cones, model ODE, moving spheres"};
  app.require_subcommand(1);
  Args a;

  auto add_tol = [&](CLI::App* sub) { sub->add_option("--tol", a.tol, "tolerance override"); };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", a.seed, "RNG / grid seed"); };

  CLI::App* eig = app.add_subcommand("eig", "eigenvalues of the conformal Hessian at a point");
  eig->add_option("--field", a.field_path, "field spec JSON")->required();
  eig->add_option("--point", a.point_text, "evaluation point, comma separated")->required();
  eig->add_option("--expect", a.expect_text, "expected eigenvalues");
  add_tol(eig);
  a.out.attach(eig);

  CLI::App* inv = app.add_subcommand("invariance", "sorted-spectrum invariance under random maps");
  inv->add_option("--field", a.field_path, "field spec JSON")->required();
  inv->add_option("--samples", a.samples, "number of random (map, point) pairs");
  add_tol(inv);
  add_seed(inv);
  a.out.attach(inv);

  CLI::App* cone = app.add_subcommand("cone", "cone constants and optional point membership");
  cone->add_option("--cone", a.cone_name, "cone catalog name")->required();
  cone->add_option("--dim", a.dim, "eigenvalue dimension");
  cone->add_option("--point", a.point_text, "descending eigenvalue list to classify");
  cone->add_option("--expect-mu", a.expect_mu_text, "expected ray constant or 'unbounded'");
  add_tol(cone);
  a.out.attach(cone);

  CLI::App* cond = app.add_subcommand("conditions", "sampled structure report for f on its cone");
  cond->add_option("--f", a.f_name, "symmetric function catalog name")->required();
  cond->add_option("--cone", a.cone_name, "cone catalog name (default: the f's own)");
  cond->add_option("--dim", a.dim, "eigenvalue dimension");
  cond->add_option("--samples", a.samples, "interior sample count");
  cond->add_option("--expect-degree", a.expect_degree, "expected homogeneity degree");
  add_tol(cond);
  add_seed(cond);
  a.out.attach(cond);

  CLI::App* ode = app.add_subcommand("ode", "integrate the boundary profile equation");
  ode->add_option("--mu", a.mu, "cone ray constant (model mode)");
  ode->add_option("--p", a.p_exp, "equation exponent")->required();
  ode->add_option("--v0", a.v0, "initial value")->required();
  ode->add_option("--w0", a.w0, "initial slope (model mode)");
  ode->add_option("--tmax", a.tmax, "integration horizon");
  ode->add_option("--f", a.f_name, "symmetric function name (general mode)");
  ode->add_option("--cone", a.cone_name, "cone name (general mode)");
  ode->add_option("--c", a.c, "boundary slope datum (general mode)");
  ode->add_option("--dim", a.dim, "eigenvalue dimension (general mode)");
  ode->add_option("--expect", a.expect_text, "expected classification: global|blowup");
  a.out.attach(ode);

  CLI::App* th = app.add_subcommand("threshold", "closed-form blow-up threshold slope");
  th->add_option("--mu", a.mu, "cone ray constant")->required();
  th->add_option("--p", a.p_exp, "equation exponent")->required();
  th->add_option("--v0", a.v0, "initial value")->required();
  th->add_option("--expect", a.expect_text, "expected threshold");
  add_tol(th);
  a.out.attach(th);

  CLI::App* sph = app.add_subcommand("spheres", "sphere comparison and critical radius");
  sph->add_option("--field", a.field_path, "field spec JSON")->required();
  sph->add_option("--point", a.point_text, "boundary center, comma separated")->required();
  sph->add_option("--lam", a.lam, "test one radius instead of searching");
  sph->add_option("--grid", a.grid_path, "grid spec JSON (default: seeded box grid)");
  sph->add_option("--expect", a.expect_text, "expected critical radius or 'unbounded'");
  add_tol(sph);
  add_seed(sph);
  a.out.attach(sph);

  CLI::App* rig = app.add_subcommand("rigidity", "bubble fit plus normalization checks");
  rig->add_option("--field", a.field_path, "field spec JSON")->required();
  rig->add_option("--f", a.f_name, "symmetric function catalog name")->required();
  rig->add_option("--cone", a.cone_name, "cone catalog name")->required();
  rig->add_option("--c", a.c, "boundary slope datum")->required();
  rig->add_option("--p", a.p_exp, "equation exponent for the residual pre-check");
  rig->add_option("--grid", a.grid_path, "grid spec JSON");
  add_tol(rig);
  add_seed(rig);
  a.out.attach(rig);

  CLI::App* cex = app.add_subcommand("counterexample", "verified obstruction field catalog");
  cex->add_option("kind", a.kind_text,
                  "log_power|boundary_drift|barrier|xn_only|aux_quadratic")
      ->required();
  cex->add_option("--dim", a.dim, "ambient dimension");
  cex->add_option("--alpha", a.alpha, "log-power exponent");
  cex->add_option("--mu", a.mu, "barrier / profile parameter");
  cex->add_option("--c", a.c, "slope datum / drift strength");
  cex->add_option("--delta", a.delta, "barrier cutoff");
  cex->add_option("--eps", a.eps, "barrier amplitude");
  cex->add_option("--dtilde", a.dtilde, "aux drift strength");
  cex->add_option("--cone", a.cone_name, "cone catalog name override");
  cex->add_option("--grid", a.grid_path, "grid spec JSON (xn_only)");
  cex->add_option("--samples", a.samples, "certificate sample count");
  add_seed(cex);
  a.out.attach(cex);

  CLI::App* res = app.add_subcommand("residual", "pointwise equation certificate on a grid");
  res->add_option("--field", a.field_path, "field spec JSON")->required();
  res->add_option("--f", a.f_name, "symmetric function catalog name")->required();
  res->add_option("--cone", a.cone_name, "cone catalog name")->required();
  res->add_option("--p", a.p_exp, "equation exponent");
  res->add_option("--c", a.c, "boundary slope datum");
  res->add_option("--grid", a.grid_path, "grid spec JSON");
  add_tol(res);
  add_seed(res);
  a.out.attach(res);

  CLI::App* ric = app.add_subcommand("ricci", "linear map between curvature spectra");
  ric->add_option("--lams", a.lams_text, "descending eigenvalue list");
  ric->add_option("--field", a.field_path, "field spec JSON (with --point)");
  ric->add_option("--point", a.point_text, "evaluation point for --field");
  ric->add_flag("--inverse", a.inverse, "map curvature back instead of forward");
  ric->add_option("--expect", a.expect_text, "expected output eigenvalues");
  add_tol(ric);
  a.out.attach(ric);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (eig->parsed()) return run_eig(a, eig->count("--expect") > 0);
    if (inv->parsed()) return run_invariance(a);
    if (cone->parsed())
      return run_cone(a, cone->count("--point") > 0, cone->count("--expect-mu") > 0);
    if (cond->parsed())
      return run_conditions(a, cond->count("--cone") > 0, cond->count("--expect-degree") > 0);
    if (ode->parsed()) {
      const bool general = ode->count("--f") > 0;
      if (!general && ode->count("--w0") == 0)
        throw InputError("ode: model mode needs --w0 (or pass --f for general mode)");
      if (!general && ode->count("--mu") == 0)
        throw InputError("ode: model mode needs --mu");
      if (general && ode->count("--c") == 0)
        throw InputError("ode: general mode needs the boundary datum --c");
      return run_ode(a, general, ode->count("--cone") > 0, ode->count("--expect") > 0);
    }
    if (th->parsed()) return run_threshold(a, th->count("--expect") > 0);
    if (sph->parsed())
      return run_spheres(a, sph->count("--lam") > 0, sph->count("--expect") > 0);
    if (rig->parsed()) return run_rigidity(a);
    if (cex->parsed()) return run_counterexample(a, cex);
    if (res->parsed()) return run_residual(a);
    if (ric->parsed()) {
      const bool from_field = ric->count("--field") > 0;
      if (from_field && ric->count("--point") == 0)
        throw InputError("ricci: --field needs --point");
      if (!from_field && ric->count("--lams") == 0)
        throw InputError("ricci: need --lams or --field with --point");
      return run_ricci(a, from_field, ric->count("--expect") > 0);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    json j{{"command", "error"}, {"error", e.what()}, {"pass", false}};
    std::cout << dump_json(j);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
