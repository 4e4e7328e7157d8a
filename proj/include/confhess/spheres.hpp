#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "confhess/cones.hpp"
#include "confhess/field.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// Least-squares reconstruction of e^{-v} as alpha|x|^2 + beta.x + gamma.
// A positive fit pins the bubble parameters: xbar = -beta/(2 alpha),
// a = 1/(gamma - alpha|xbar|^2), b = alpha a.
struct BubbleFit {
  bool is_bubble = false;
  BubbleParams params;  // meaningful only when is_bubble
  double alpha = 0.0, gamma = 0.0;
  Vec beta;
  // max |v - v_fit| over the samples when is_bubble; otherwise the max
  // mismatch |e^{-v} - q(x)| of the unconstrained quadratic fit.
  double residual = 0.0;
};

// Needs at least n + 2 samples in general position; rank deficiency
// surfaces as NumericError from the QR solve.
BubbleFit fit_bubble(const std::vector<Vec>& points, const Vec& values);

// Deterministic sample cloud over a box clipped to the closed upper half
// space: tensor lattice plus optional Halton scatter, with the x_n = 0
// face sampled exactly when the box touches it.
struct ExcludedBall {
  Vec center;
  double radius = 0.0;
};

struct GridSpec {
  Vec lo, hi;                   // box corners, lo < hi per axis
  std::vector<int> resolution;  // lattice points per axis, each >= 2
  std::vector<ExcludedBall> excluded;
  int scatter = 0;          // extra Halton points inside the box
  std::uint64_t seed = 0;   // offsets the Halton sequence
  bool boundary_layer = true;
};

struct GridPoints {
  std::vector<Vec> interior;  // x_n > 0
  std::vector<Vec> boundary;  // x_n = 0 exactly
};

// [-r, r] in the first n - 1 axes, [0, r] in the last.
GridSpec box_grid(int n, double radius, int res_per_axis, int scatter = 0,
                  std::uint64_t seed = 0);

// Throws InputError on resolution < 2, inverted corners, or a box that
// misses the upper half space.
GridPoints grid_points(const GridSpec& spec);

nlohmann::json grid_to_json(const GridSpec& spec);
GridSpec grid_from_json(const nlohmann::json& j);
GridSpec load_grid_file(const std::string& path);

// min over the grid of v - v_{x,lam} where v_{x,lam} is the Kelvin
// reflection about the sphere of radius lam at the boundary point x.
// Zero on the fixed sphere itself; turns negative once lam passes the
// critical radius. The grid must avoid the open ball B_lam(x)
// (InputError otherwise).
double sphere_comparison(const FieldPtr& v, const Vec& x, double lam,
                         const GridSpec& grid);

inline constexpr double kLambdaMax = 1e3;

// Largest lam for which the comparison still holds, found by an upward
// scan plus bisection over [tol, kLambdaMax]; unbounded when it never
// fails on the reachable grid. Throws DomainError when the comparison
// already fails at lam = tol, NumericError when the bracket keeps
// failing the 1e-4 grazing-contact re-check.
MuValue critical_lambda(const FieldPtr& v, const Vec& x,
                        const GridSpec& grid, double tol = 1e-8);

// Closed form sqrt((1 + b|xbar - x|^2)/b) for the radius at which a
// bubble is its own Kelvin reflection about the boundary point x.
double bubble_critical_lambda(const BubbleParams& p, const Vec& x);

// Pointwise certificate for f(lam(A[v])) = e^{-p v} with slope condition
// dv/dx_n = bc e^v on the boundary face. grid echoes the sampling plan
// so a report is reproducible from its own JSON.
struct VerifyReport {
  double interior_residual_max = 0.0;
  double boundary_residual_max = 0.0;
  double cone_margin_min = 0.0;
  bool pass = false;
  nlohmann::json grid;
  std::uint64_t seed = 0;
};

nlohmann::json verify_report_to_json(const VerifyReport& r);

// tol defaults to 1e-8 with analytic jets, 1e-4 with finite differences.
// pass also requires the spectrum to stay inside the cone up to -1e-9.
VerifyReport residual_check(const FieldPtr& v, const SymFunc& f,
                            const Cone& cone, double p_exp, double bc,
                            const GridSpec& grid,
                            std::optional<double> tol = std::nullopt);

// Fits a bubble to the grid samples, then checks both normalizations:
// |f(2 a^-2 b e) - 1| and |2 a^-1 b xbar_n - bc|, each within 1e-8.
struct RigidityReport {
  BubbleFit fit;
  double f_gap = 0.0;
  double boundary_gap = 0.0;
  double ray_margin = 0.0;  // cone margin of the fitted spectrum ray
  bool pass = false;
};

RigidityReport rigidity_check(const FieldPtr& v, const SymFunc& f,
                              const Cone& cone, double bc,
                              const GridSpec& grid);

// Named obstruction fields, each delivered with a sampled certificate of
// the property it witnesses.
enum class CounterexampleKind {
  log_power,       // spectrum on the mixed ray, zero boundary slope datum
  boundary_drift,  // cone-interior field whose slope datum stays below c e^v
  barrier,         // annulus field exterior to the cone everywhere
  xn_only,         // one-variable solution of the shifted min equation
  aux_quadratic,   // log singularity plus linear drift and quadratic term
};

CounterexampleKind counterexample_kind_from_name(const std::string& name);
const char* to_string(CounterexampleKind kind);

struct CounterexampleParams {
  int dim = 0;          // 0 picks the kind default (3; barrier uses 4)
  double alpha = 1.0;   // log-power exponent, > 0
  double mu = 3.0;      // barrier / one-variable equation parameter, > 1
  double c = -0.1;      // slope datum, < 0 for boundary_drift
  double delta = 0.01;  // barrier cutoff, > 0
  double eps = 1.0;     // barrier amplitude, > 0
  double dtilde = 0.1;  // aux drift strength
  ConePtr cone;         // null picks the kind default
  std::optional<GridSpec> grid;  // xn_only only
  std::uint64_t seed = 0;
  int samples = 50;
};

struct CounterexampleResult {
  FieldPtr field;
  VerifyReport report;
  std::string summary;  // one line stating the verified property
};

CounterexampleResult counterexample(CounterexampleKind kind,
                                    const CounterexampleParams& prm);

}  // namespace confhess
