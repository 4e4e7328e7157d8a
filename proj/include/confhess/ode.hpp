#pragma once

#include <string>
#include <vector>

#include "confhess/cones.hpp"
#include "confhess/jsonio.hpp"
#include "confhess/linalg.hpp"

namespace confhess {

// Parameters of the one-variable model equation
//   v'' + theta (v')^2 + e^{(2-p) v} = 0,  theta = (mu - 1)/2,
// written as the first-order system in (v, w = v').  q = (p - 2)/2 is the
// exponent appearing in the conserved quantity.
struct OdeParams {
  double mu = 0.0;
  double p_exp = 0.0;
  double theta = 0.0;
  double q_exp = 0.0;
};

// mu must exceed 1 so theta is positive.
OdeParams make_ode_params(double mu, double p);

// One accepted integration step.  lam_top/lam_rest are populated by the
// general integrator (the two distinct eigenvalue levels); first_int, drift
// and cone_margin are NaN when undefined for the trajectory at hand.
struct OdeSample {
  double t = 0.0;
  double v = 0.0;
  double w = 0.0;
  double phi = 0.0;
  double first_int = 0.0;
  double drift = 0.0;
  double cone_margin = 0.0;
  double lam_top = 0.0;
  double lam_rest = 0.0;
};

enum class OdeOutcome { global, blowup };

const char* to_string(OdeOutcome o);

struct OdeTrajectory {
  std::vector<OdeSample> samples;  // strictly increasing times
  OdeOutcome classification = OdeOutcome::global;
  // Escape-time bracket, valid when classification is blowup.
  double blowup_lo = 0.0;
  double blowup_hi = 0.0;
  double max_drift = 0.0;
  // Exponents used for the conserved-quantity columns; NaN when those
  // columns are undefined (no finite ray constant, or q equals theta).
  double theta = 0.0;
  double q_exp = 0.0;
  double mu = 0.0;
  double p_exp = 0.0;
  double v0 = 0.0;
  double w0 = 0.0;
  double t_max = 0.0;
  bool cone_exited = false;
  double cone_exit_time = 0.0;  // NaN when the cone was never exited
  std::string label;            // "model" or the function name
};

// Conserved quantity phi^{2 theta} w^2 - phi^{-2(q-theta)}/(q-theta).
// DomainError when phi <= 0 or q equals theta (the quantity degenerates).
double first_integral(const OdeParams& params, double phi, double w);

// Same quantity in (v, w) coordinates with explicit exponents.
double first_integral_vw(double theta, double q, double v, double w);

// Closed-form global-existence threshold for the initial slope:
// sqrt(2) (p - mu - 1)^{-1/2} e^{-(p-2) v0 / 2}.  ParamError when mu <= 1,
// DomainError when p <= mu + 1 (no threshold in the nonexistence range).
double threshold_w0(double mu, double p, double v0);

// Adaptive Runge-Kutta integration of the model system from (v0, w0) at
// t = 0.  Ends at t_max (global) or with a bracketed escape time (blowup:
// |w| > 1e8 or phi outside [1e-12, 1e12]).  Step underflow without escape
// is a NumericError.
OdeTrajectory integrate_model(const OdeParams& params, double v0, double w0,
                              double t_max);

// One-variable integration for a general symmetric function: at each stage
// the second eigenvalue level is -w^2 e^{-2v}/2, the top level is found by
// monotone bisection of f(lam_1, lam_2, ..., lam_2) = e^{-p v}, and v'' is
// recovered from the top level.  Initial slope is bc * e^{v0}.  Cone exit
// is flagged and integration continues.
OdeTrajectory integrate_general(const SymFunc& f, const Cone& cone, double p,
                                double bc, double v0, double t_max);

// Hermite evaluation of v(t) between accepted samples (w is the exact
// slope at each node).  DomainError outside the sampled range.
double trajectory_value(const OdeTrajectory& traj, double t);

// Discrete concavity probe: classifies the second difference of
// e^{(mu-1)v/2} (or of v when mu = 1) at interior samples.
struct ConvexityReport {
  int negative = 0;
  int zero = 0;  // |second difference| below 1e-10 * scale
  int positive = 0;
  double max_second = 0.0;
  bool all_nonpositive = false;
  double min_cone_margin = 0.0;  // NaN when the trajectory has no margins
};

// Requires at least 5 samples.
ConvexityReport convexity_check(double mu, const OdeTrajectory& traj);

// CSV with header t,v,w,phi,I,drift,cone_margin, one row per accepted
// step; written atomically.
void write_trajectory_csv(const OdeTrajectory& traj, const std::string& path);
std::string trajectory_csv_text(const OdeTrajectory& traj);

// Sidecar description: classification, escape bracket, parameters, drift.
nlohmann::json trajectory_sidecar_json(const OdeTrajectory& traj);

}  // namespace confhess
