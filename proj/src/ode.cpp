#include "confhess/ode.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "confhess/common.hpp"

namespace confhess {

namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-12;
constexpr double kWEscape = 1e8;
const double kVEscape = std::log(1e12);  // phi bounds are e^{+-kVEscape}
constexpr long kMaxSteps = 5000000;

const double kNan = std::numeric_limits<double>::quiet_NaN();

bool state_escaped(double v, double w) {
  return !std::isfinite(v) || !std::isfinite(w) || std::fabs(w) > kWEscape ||
         std::fabs(v) > kVEscape;
}

// Right-hand side of the first-order system in (v, w); may also report the
// eigenvalue levels it worked with.
struct Rhs {
  virtual ~Rhs() = default;
  virtual void eval(double v, double w, double* dv, double* dw,
                    double* lam_top, double* lam_rest) const = 0;
};

struct ModelRhs : Rhs {
  double theta, q;
  ModelRhs(double theta_, double q_) : theta(theta_), q(q_) {}
  void eval(double v, double w, double* dv, double* dw, double* lam_top,
            double* lam_rest) const override {
    *dv = w;
    *dw = -theta * w * w - std::exp(-2.0 * q * v);
    if (lam_top) *lam_top = kNan;
    if (lam_rest) *lam_rest = kNan;
  }
};

struct GeneralRhs : Rhs {
  const SymFunc* f;
  double p;
  int n;
  GeneralRhs(const SymFunc& f_, double p_) : f(&f_), p(p_), n(f_.dim()) {}

  double f_at(double lam1, double lam2) const {
    Vec lams(n, lam2);
    if (lam1 >= lam2) {
      lams[0] = lam1;
    } else {
      lams[n - 1] = lam1;
    }
    // Entries are already ordered; value_unchecked re-sorts defensively.
    return f->value_unchecked(lams);
  }

  void eval(double v, double w, double* dv, double* dw, double* lam_top,
            double* lam_rest) const override {
    *dv = w;
    double lam2 = -0.5 * w * w * std::exp(-2.0 * v);
    double target = std::exp(-p * v);
    // Ellipticity makes f strictly increasing in the top level, so a sign
    // change brackets the unique solution.
    double lo = lam2 - 1.0, hi = lam2 + 1.0;
    double flo = f_at(lo, lam2) - target;
    double fhi = f_at(hi, lam2) - target;
    int doublings = 0;
    double width = 2.0;
    while (flo > 0.0 || fhi < 0.0) {
      if (++doublings > 60) {
        throw NumericError("no bracket for the top eigenvalue level");
      }
      width *= 2.0;
      if (flo > 0.0) {
        lo = lam2 - width;
        flo = f_at(lo, lam2) - target;
      }
      if (fhi < 0.0) {
        hi = lam2 + width;
        fhi = f_at(hi, lam2) - target;
      }
    }
    for (int iter = 0;
         iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo) + std::fabs(hi));
         ++iter) {
      double mid = 0.5 * (lo + hi);
      if (f_at(mid, lam2) - target <= 0.0) lo = mid;
      else hi = mid;
    }
    double lam1 = 0.5 * (lo + hi);
    *dw = 0.5 * w * w - std::exp(2.0 * v) * lam1;
    if (lam_top) *lam_top = lam1;
    if (lam_rest) *lam_rest = lam2;
  }
};

// Dormand-Prince 5(4) pair.
struct DP45 {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct DriftSpec {
  bool active = false;
  double theta = kNan;
  double q = kNan;
  double i0 = kNan;
};

double relative_drift(const DriftSpec& d, double v, double w) {
  if (!d.active) return kNan;
  double term1 = std::exp(2.0 * d.theta * v) * w * w;
  double term2 = std::exp(-2.0 * (d.q - d.theta) * v) / (d.q - d.theta);
  double value = term1 - term2;
  // Term-magnitude scaling keeps cancellation noise near escape from
  // polluting the conservation measure.
  double denom = std::max(1.0 + std::fabs(d.i0),
                          std::fabs(term1) + std::fabs(term2));
  return std::fabs(value - d.i0) / denom;
}

struct ConeProbe {
  const Cone* cone = nullptr;
  int n = 0;
};

using ExtraEscape = std::function<bool(double v, double w)>;

OdeTrajectory run_integration(const Rhs& rhs, double v0, double w0,
                              double t_max, const DriftSpec& drift_in,
                              const ConeProbe& probe,
                              const ExtraEscape& extra_escape) {
  if (!(t_max > 0.0)) throw ParamError("t_max must be positive");
  OdeTrajectory traj;
  traj.t_max = t_max;
  traj.v0 = v0;
  traj.w0 = w0;
  traj.blowup_lo = kNan;
  traj.blowup_hi = kNan;
  traj.cone_exit_time = kNan;

  DriftSpec drift = drift_in;
  if (drift.active) drift.i0 = first_integral_vw(drift.theta, drift.q, v0, w0);

  double t = 0.0, v = v0, w = w0;
  double lam_top = kNan, lam_rest = kNan;
  double k1v, k1w;
  rhs.eval(v, w, &k1v, &k1w, &lam_top, &lam_rest);

  auto record = [&](double tt, double vv, double ww, double lt, double lr) {
    OdeSample s;
    s.t = tt;
    s.v = vv;
    s.w = ww;
    s.phi = std::exp(vv);
    s.first_int = drift.active ? first_integral_vw(drift.theta, drift.q, vv, ww)
                               : kNan;
    s.drift = relative_drift(drift, vv, ww);
    s.lam_top = lt;
    s.lam_rest = lr;
    s.cone_margin = kNan;
    if (probe.cone && std::isfinite(lt) && std::isfinite(lr)) {
      Vec lams(probe.n, lr);
      if (lt >= lr) lams[0] = lt;
      else lams[probe.n - 1] = lt;
      sort_descending(lams);
      s.cone_margin = cone_margin(*probe.cone, lams);
      if (cone_status(*probe.cone, lams) == ConeStatus::exterior &&
          !traj.cone_exited) {
        traj.cone_exited = true;
        traj.cone_exit_time = tt;
      }
    }
    if (std::isfinite(s.drift)) traj.max_drift = std::max(traj.max_drift, s.drift);
    traj.samples.push_back(s);
  };
  record(t, v, w, lam_top, lam_rest);

  double h = 1e-3;
  long steps = 0;
  while (t < t_max) {
    if (t_max - t <= 1e-12 * std::max(1.0, t_max)) break;  // fp-close to the end
    if (++steps > kMaxSteps) throw NumericError("step budget exhausted");
    if (h < 1e-12 * std::max(1.0, t)) {
      throw NumericError("step size underflow without an escape certificate");
    }
    h = std::min(h, t_max - t);

    bool ok = true;
    double k2v = 0, k2w = 0, k3v = 0, k3w = 0, k4v = 0, k4w = 0;
    double k5v = 0, k5w = 0, k6v = 0, k6w = 0, k7v = 0, k7w = 0;
    double v5 = 0, w5 = 0;
    double lt_new = kNan, lr_new = kNan;
    try {
      using D = DP45;
      rhs.eval(v + h * D::a21 * k1v, w + h * D::a21 * k1w, &k2v, &k2w, nullptr,
               nullptr);
      rhs.eval(v + h * (D::a31 * k1v + D::a32 * k2v),
               w + h * (D::a31 * k1w + D::a32 * k2w), &k3v, &k3w, nullptr,
               nullptr);
      rhs.eval(v + h * (D::a41 * k1v + D::a42 * k2v + D::a43 * k3v),
               w + h * (D::a41 * k1w + D::a42 * k2w + D::a43 * k3w), &k4v,
               &k4w, nullptr, nullptr);
      rhs.eval(
          v + h * (D::a51 * k1v + D::a52 * k2v + D::a53 * k3v + D::a54 * k4v),
          w + h * (D::a51 * k1w + D::a52 * k2w + D::a53 * k3w + D::a54 * k4w),
          &k5v, &k5w, nullptr, nullptr);
      rhs.eval(v + h * (D::a61 * k1v + D::a62 * k2v + D::a63 * k3v +
                        D::a64 * k4v + D::a65 * k5v),
               w + h * (D::a61 * k1w + D::a62 * k2w + D::a63 * k3w +
                        D::a64 * k4w + D::a65 * k5w),
               &k6v, &k6w, nullptr, nullptr);
      v5 = v + h * (D::b1 * k1v + D::b3 * k3v + D::b4 * k4v + D::b5 * k5v +
                    D::b6 * k6v);
      w5 = w + h * (D::b1 * k1w + D::b3 * k3w + D::b4 * k4w + D::b5 * k5w +
                    D::b6 * k6w);
      rhs.eval(v5, w5, &k7v, &k7w, &lt_new, &lr_new);
    } catch (const NumericError&) {
      // Inversion failures at wild trial states behave like an infinite
      // local error: shrink and retry (underflow guard above re-raises).
      ok = false;
    }

    double err = 0.0;
    if (ok) {
      using D = DP45;
      double ev = h * (D::e1 * k1v + D::e3 * k3v + D::e4 * k4v + D::e5 * k5v +
                       D::e6 * k6v + D::e7 * k7v);
      double ew = h * (D::e1 * k1w + D::e3 * k3w + D::e4 * k4w + D::e5 * k5w +
                       D::e6 * k6w + D::e7 * k7w);
      double sv = kAbsTol + kRelTol * std::max(std::fabs(v), std::fabs(v5));
      double sw = kAbsTol + kRelTol * std::max(std::fabs(w), std::fabs(w5));
      err = std::max(std::fabs(ev) / sv, std::fabs(ew) / sw);
      if (!std::isfinite(err)) ok = false;
    }

    if (!ok || err > 1.0) {
      double shrink = ok ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= shrink;
      continue;
    }

    double t_new = t + h;
    if (state_escaped(v5, w5) || (extra_escape && extra_escape(v5, w5))) {
      traj.classification = OdeOutcome::blowup;
      traj.blowup_lo = t;
      traj.blowup_hi = t_new;
      if (std::isfinite(v5) && std::isfinite(w5)) {
        record(t_new, v5, w5, lt_new, lr_new);
      }
      return traj;
    }

    t = t_new;
    v = v5;
    w = w5;
    k1v = k7v;  // first-same-as-last
    k1w = k7w;
    record(t, v, w, lt_new, lr_new);
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
  }
  traj.classification = OdeOutcome::global;
  return traj;
}

}  // namespace

OdeParams make_ode_params(double mu, double p) {
  if (!(mu > 1.0)) throw ParamError("mu must exceed 1");
  OdeParams params;
  params.mu = mu;
  params.p_exp = p;
  params.theta = (mu - 1.0) / 2.0;
  params.q_exp = (p - 2.0) / 2.0;
  return params;
}

const char* to_string(OdeOutcome o) {
  return o == OdeOutcome::global ? "global" : "blowup";
}

double first_integral_vw(double theta, double q, double v, double w) {
  if (std::fabs(q - theta) < 1e-12) {
    throw DomainError("conserved quantity degenerates at q = theta");
  }
  return std::exp(2.0 * theta * v) * w * w -
         std::exp(-2.0 * (q - theta) * v) / (q - theta);
}

double first_integral(const OdeParams& params, double phi, double w) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  return first_integral_vw(params.theta, params.q_exp, std::log(phi), w);
}

double threshold_w0(double mu, double p, double v0) {
  if (!(mu > 1.0)) throw ParamError("mu must exceed 1");
  if (!(p > mu + 1.0)) {
    throw DomainError("threshold requires p > mu + 1");
  }
  return std::sqrt(2.0) / std::sqrt(p - mu - 1.0) *
         std::exp(-(p - 2.0) * v0 / 2.0);
}

OdeTrajectory integrate_model(const OdeParams& params, double v0, double w0,
                              double t_max) {
  if (!(params.theta > 0.0)) throw ParamError("model requires theta > 0");
  ModelRhs rhs(params.theta, params.q_exp);
  DriftSpec drift;
  if (std::fabs(params.q_exp - params.theta) > 1e-12) {
    drift.active = true;
    drift.theta = params.theta;
    drift.q = params.q_exp;
  }
  OdeTrajectory traj =
      run_integration(rhs, v0, w0, t_max, drift, ConeProbe{}, {});
  traj.label = "model";
  traj.mu = params.mu;
  traj.p_exp = params.p_exp;
  traj.theta = drift.active ? params.theta : kNan;
  traj.q_exp = drift.active ? params.q_exp : kNan;
  return traj;
}

OdeTrajectory integrate_general(const SymFunc& f, const Cone& cone, double p,
                                double bc, double v0, double t_max) {
  if (f.dim() != cone.dim()) throw ParamError("function/cone dimension mismatch");
  GeneralRhs rhs(f, p);
  DriftSpec drift;
  MuValue mu = mu_minus(cone);
  if (!mu.unbounded && mu.value > 1.0) {
    double theta = (mu.value - 1.0) / 2.0;
    double q = (p - 2.0) / 2.0;
    if (std::fabs(q - theta) > 1e-12) {
      drift.active = true;
      drift.theta = theta;
      drift.q = q;
    }
  }
  ConeProbe probe{&cone, cone.dim()};
  double w0 = bc * std::exp(v0);
  // The vector field is defined through the curvature equation; once the
  // second eigenvalue level or the right-hand side outgrows the bracket
  // reach (~2^60), the state is past any continuable solution.  Escape at
  // 1e16 leaves a two-decade safety margin below that limit.
  ExtraEscape data_escape = [p](double v, double w) {
    if (0.5 * w * w * std::exp(-2.0 * v) > 1e16) return true;
    return p > 0.0 && -p * v > 16.0 * std::log(10.0);
  };
  OdeTrajectory traj =
      run_integration(rhs, v0, w0, t_max, drift, probe, data_escape);
  traj.label = f.name();
  traj.mu = mu.unbounded ? kNan : mu.value;
  traj.p_exp = p;
  traj.theta = drift.active ? drift.theta : kNan;
  traj.q_exp = drift.active ? drift.q : kNan;
  return traj;
}

double trajectory_value(const OdeTrajectory& traj, double t) {
  const auto& ss = traj.samples;
  if (ss.size() < 2) throw InputError("trajectory has fewer than 2 samples");
  if (t < ss.front().t || t > ss.back().t) {
    throw DomainError("time outside the sampled range");
  }
  size_t hi = 1;
  while (hi + 1 < ss.size() && ss[hi].t < t) ++hi;
  const OdeSample& A = ss[hi - 1];
  const OdeSample& B = ss[hi];
  double h = B.t - A.t;
  if (h <= 0.0) return A.v;
  double s = (t - A.t) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  return h00 * A.v + h10 * h * A.w + h01 * B.v + h11 * h * B.w;
}

ConvexityReport convexity_check(double mu, const OdeTrajectory& traj) {
  const auto& ss = traj.samples;
  if (ss.size() < 5) throw InputError("convexity check needs at least 5 samples");
  ConvexityReport rep;
  rep.max_second = -std::numeric_limits<double>::infinity();
  rep.min_cone_margin = kNan;
  double expo = (mu - 1.0) / 2.0;
  auto u = [&](const OdeSample& s) {
    return std::fabs(expo) < 1e-14 ? s.v : std::exp(expo * s.v);
  };
  for (size_t i = 1; i + 1 < ss.size(); ++i) {
    double hm = ss[i].t - ss[i - 1].t;
    double hp = ss[i + 1].t - ss[i].t;
    if (hm <= 0.0 || hp <= 0.0) continue;
    double um = u(ss[i - 1]), u0 = u(ss[i]), up = u(ss[i + 1]);
    double d2 = 2.0 * ((up - u0) / hp - (u0 - um) / hm) / (hm + hp);
    double scale = std::max({1.0, std::fabs(um), std::fabs(u0), std::fabs(up)});
    rep.max_second = std::max(rep.max_second, d2);
    if (std::fabs(d2) <= 1e-10 * scale) ++rep.zero;
    else if (d2 < 0.0) ++rep.negative;
    else ++rep.positive;
    if (std::isfinite(ss[i].cone_margin)) {
      rep.min_cone_margin = std::isfinite(rep.min_cone_margin)
                                ? std::min(rep.min_cone_margin, ss[i].cone_margin)
                                : ss[i].cone_margin;
    }
  }
  rep.all_nonpositive = rep.positive == 0;
  return rep;
}

std::string trajectory_csv_text(const OdeTrajectory& traj) {
  std::ostringstream os;
  os << "t,v,w,phi,I,drift,cone_margin\n";
  os << std::setprecision(17);
  for (const OdeSample& s : traj.samples) {
    os << s.t << ',' << s.v << ',' << s.w << ',' << s.phi << ',' << s.first_int
       << ',' << s.drift << ',' << s.cone_margin << '\n';
  }
  return os.str();
}

void write_trajectory_csv(const OdeTrajectory& traj, const std::string& path) {
  write_text_atomic(path, trajectory_csv_text(traj));
}

namespace {

nlohmann::json num_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

nlohmann::json trajectory_sidecar_json(const OdeTrajectory& traj) {
  nlohmann::json j;
  j["label"] = traj.label;
  j["classification"] = to_string(traj.classification);
  if (traj.classification == OdeOutcome::blowup) {
    j["blowup_bracket"] = {num_or_null(traj.blowup_lo), num_or_null(traj.blowup_hi)};
  }
  j["max_drift"] = num_or_null(traj.max_drift);
  j["params"] = {{"mu", num_or_null(traj.mu)},     {"p", num_or_null(traj.p_exp)},
                 {"theta", num_or_null(traj.theta)}, {"q", num_or_null(traj.q_exp)},
                 {"v0", num_or_null(traj.v0)},     {"w0", num_or_null(traj.w0)},
                 {"t_max", num_or_null(traj.t_max)}};
  j["cone_exited"] = traj.cone_exited;
  j["cone_exit_time"] = num_or_null(traj.cone_exit_time);
  j["samples"] = static_cast<int>(traj.samples.size());
  return j;
}

}  // namespace confhess
