#include "beltrami/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beltrami {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// b - b*: difference against the embedded 4th-order solution
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct FieldEval {
  const VectorField& w;

  // Evaluates w; reports false on guard exit or a domain error (the
  // trajectory left the region where the field is defined).
  bool operator()(const Vec3& p, Vec3& out) const {
    if (!p.finite()) return false;
    if (!w.guard.admits(p)) return false;
    try {
      out = w.eval_unguarded(p);
    } catch (const Error& e) {
      if (e.code() == Error::Code::Domain) return false;
      throw;
    }
    return out.finite();
  }
};

double error_norm(const Vec3& err, const Vec3& y0, const Vec3& y1, double atol, double rtol) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double e = err[i] / scale;
    sum += e * e;
  }
  return std::sqrt(sum / 3.0);
}

}  // namespace

Streamline trace_streamline(const VectorField& w, const Vec3& x0, double t_end,
                            const StepControl& ctrl, const OrthoTriple* invariants) {
  if (!(t_end >= 0.0))
    throw Error(Error::Code::InvalidArgument, "t_end must be nonnegative");
  FieldEval field{w};

  Streamline s;
  Expr L_expr = invariants ? invariants->L_theta_expr() : Expr();
  auto record = [&](double t, const Vec3& p) {
    s.times.push_back(t);
    s.points.push_back(p);
    if (invariants) {
      s.theta_values.push_back(invariants->theta.expr.eval(p));
      s.L_theta_values.push_back(L_expr.eval(p));
    }
  };

  Vec3 y = x0;
  Vec3 k1;
  if (!field(y, k1)) {
    std::string msg = "streamline seed is outside the field's domain";
    throw Error(Error::Code::Guard, msg);
  }
  if (invariants && !invariants->guard().admits(x0))
    throw Error(Error::Code::Guard, "streamline seed violates the triple's guard");
  record(0.0, y);

  double t = 0.0;
  if (t_end == 0.0) {
    s.t_final = 0.0;
    return s;
  }

  double h = ctrl.initial_step > 0.0
                 ? ctrl.initial_step
                 : std::min(ctrl.max_step, 1e-2 * (1.0 + norm(y)) / (norm(k1) + 1e-10));
  h = std::min(h, t_end);
  double prev_err = 1.0;  // PI controller memory

  const double underflow = 1e-14;
  while (t < t_end) {
    double remaining = t_end - t;
    if (remaining <= underflow * std::max(1.0, std::abs(t))) break;  // done to round-off
    h = std::min(h, remaining);
    if (h < underflow * std::max(1.0, std::abs(t)))
      throw Error(Error::Code::StepUnderflow,
                  "step size underflow at t = " + format_double(t));

    Vec3 k2, k3, k4, k5, k6, k7;
    Vec3 y2 = y + h * kA21 * k1;
    bool ok = field(y2, k2);
    Vec3 y3 = y + h * (kA31 * k1 + kA32 * k2);
    ok = ok && field(y3, k3);
    Vec3 y4 = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
    ok = ok && field(y4, k4);
    Vec3 y5 = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
    ok = ok && field(y5, k5);
    Vec3 y6 = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
    ok = ok && field(y6, k6);
    Vec3 ynew;
    if (ok) {
      ynew = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      ok = field(ynew, k7) && norm_inf(ynew) <= ctrl.max_radius;
    }
    if (!ok) {
      // A stage or the endpoint left the domain. Shrink toward the
      // boundary; below the floor, truncate and report the exit.
      if (h > 16.0 * underflow * std::max(1.0, std::abs(t))) {
        h *= 0.25;
        continue;
      }
      s.exited_domain = true;
      break;
    }

    Vec3 err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    double en = error_norm(err, y, ynew, ctrl.atol, ctrl.rtol);

    if (en <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      if (invariants && !invariants->guard().admits(y)) {
        s.exited_domain = true;  // triple guard is stricter than the field's
        break;
      }
      record(t, y);
      s.stats.accepted++;
      s.stats.max_error_estimate = std::max(s.stats.max_error_estimate, en);
      // PI controller (error exponents 0.7/5 and -0.4/5)
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.14) * std::pow(prev_err, 0.08);
      prev_err = std::max(en, 1e-10);
      h = std::min(ctrl.max_step, h * std::clamp(fac, 0.2, 5.0));
    } else {
      s.stats.rejected++;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  s.t_final = s.times.empty() ? 0.0 : s.times.back();
  return s;
}

DriftReport invariant_drift(const Streamline& s) {
  DriftReport d;
  if (!s.has_invariants() || s.theta_values.empty()) return d;
  double theta0 = s.theta_values.front();
  double L0 = s.L_theta_values.front();
  for (double v : s.theta_values) d.theta_drift = std::max(d.theta_drift, std::abs(v - theta0));
  for (double v : s.L_theta_values) d.L_drift = std::max(d.L_drift, std::abs(v - L0));
  return d;
}

namespace {

// Derivative of a sampled series at node `i` from a sliding Lagrange
// polynomial through `width` neighbouring nodes.
double lagrange_slope(const std::vector<double>& t, const std::vector<double>& f, std::size_t i,
                      std::size_t width) {
  std::size_t n = t.size();
  if (n < 2) return 0.0;
  width = std::min(width, n);
  std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
  lo = std::min(lo, n - width);
  double tc = t[i];
  double slope = 0.0;
  for (std::size_t j = lo; j < lo + width; ++j) {
    // L_j'(tc) = sum_{m != j} prod_{k != j, m} (tc - t_k) / prod_{k != j} (t_j - t_k)
    double denom = 1.0;
    for (std::size_t k = lo; k < lo + width; ++k)
      if (k != j) denom *= t[j] - t[k];
    double num = 0.0;
    for (std::size_t m = lo; m < lo + width; ++m) {
      if (m == j) continue;
      double prod = 1.0;
      for (std::size_t k = lo; k < lo + width; ++k)
        if (k != j && k != m) prod *= tc - t[k];
      num += prod;
    }
    slope += f[j] * num / denom;
  }
  return slope;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

}  // namespace

ObservableSeries evolve_observable(const ScalarField& f, const OrthoTriple& t,
                                   const VectorField& w, const Vec3& x0, double t_end,
                                   const StepControl& ctrl) {
  ObservableSeries out;
  out.trace = trace_streamline(w, x0, t_end, ctrl, &t);
  const Streamline& tr = out.trace;

  VectorField gf = gradient(f);
  VectorField gtheta = gradient(t.theta);
  VectorField gL = gradient(ScalarField(t.L_theta_expr(), t.guard()));
  VectorField c = curl(w);

  std::size_t n = tr.points.size();
  out.samples.resize(n);
  std::vector<double> fvals(n);
  double fmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = tr.points[i];
    Vec3 wv = w.eval_unguarded(p);
    Vec3 gfv = gf.eval_unguarded(p);
    double w2 = dot(wv, wv);
    double hhat = w2 > 0.0 ? dot(wv, c.eval_unguarded(p)) / w2 : 0.0;
    double bracket = hhat != 0.0
                         ? dot(gfv, cross(gtheta.eval_unguarded(p), gL.eval_unguarded(p))) / hhat
                         : 0.0;
    out.samples[i].t = tr.times[i];
    out.samples[i].f = f.expr.eval(p);
    out.samples[i].bracket_rate = bracket;
    out.samples[i].chain_rate = dot(gfv, wv);
    fvals[i] = out.samples[i].f;
    fmax = std::max(fmax, std::abs(fvals[i]));
  }

  std::vector<double> bracket_mismatch;
  std::vector<double> fd_mismatch;
  std::vector<double> steps;
  bracket_mismatch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bracket_mismatch.push_back(std::abs(out.samples[i].chain_rate - out.samples[i].bracket_rate));
    if (i + 1 < n) steps.push_back(tr.times[i + 1] - tr.times[i]);
    if (n >= 3 && i > 0 && i + 1 < n) {
      double slope = lagrange_slope(tr.times, fvals, i, 7);
      out.samples[i].fd_slope = slope;
      fd_mismatch.push_back(std::abs(slope - out.samples[i].bracket_rate));
    } else {
      out.samples[i].fd_slope = std::numeric_limits<double>::quiet_NaN();
    }
  }
  out.median_bracket_mismatch = median(bracket_mismatch);
  out.median_fd_mismatch = median(fd_mismatch);

  // FD slope of an adaptively sampled series carries the integrator's
  // per-step noise amplified by ~1/step, plus polynomial truncation; scale
  // the pass tolerance by ctrl accordingly.
  double med_step = median(steps);
  double noise = ctrl.atol + ctrl.rtol * (1.0 + fmax);
  out.fd_tolerance = med_step > 0.0 ? 1e3 * noise / med_step + 1e-12 : 1e-12;
  double bracket_tol = 10.0 * ctrl.rtol * (1.0 + fmax) + ctrl.atol;
  out.consistent = out.median_bracket_mismatch <= bracket_tol &&
                   (fd_mismatch.empty() || out.median_fd_mismatch <= out.fd_tolerance);
  return out;
}

}  // namespace beltrami
