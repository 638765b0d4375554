#include "beltrami/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace beltrami {
namespace {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature of a 1D callable.

template <typename F>
double simpson_rule(F& f, double a, double fa, double b, double fb, double& fm) {
  double m = 0.5 * (a + b);
  fm = f(m);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double simpson_recurse(F& f, double a, double fa, double b, double fb, double fm, double whole,
                       double tol, int depth) {
  double m = 0.5 * (a + b);
  double flm, frm;
  double left = simpson_rule(f, a, fa, m, fm, flm);
  double right = simpson_rule(f, m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(F f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double fm;
  double whole = simpson_rule(f, a, fa, b, fb, fm);
  return simpson_recurse(f, a, fa, b, fb, fm, whole, tol, 48);
}

// ---------------------------------------------------------------------------
// 1D antiderivative cache: node values by cumulative Simpson, evaluation by
// cubic Hermite using the exact slopes g at the nodes. Built once,
// read-only afterwards.

struct ProfileCache {
  double lo = 0.0, hi = 0.0, step = 0.0;
  int cells = 0;
  std::vector<double> values;  // antiderivative at nodes, anchored G(0) = 0
  std::vector<double> slopes;  // g at nodes
  Expr g;                      // univariate profile (variable = Var::X)

  double eval_g(double s) const { return g.eval(Vec3{s, 0.0, 0.0}); }

  void build(const Expr& profile, double s_min, double s_max, int n_cells) {
    g = profile;
    lo = s_min;
    hi = s_max;
    cells = n_cells;
    step = (hi - lo) / cells;
    auto f = [this](double s) { return eval_g(s); };
    values.assign(cells + 1, 0.0);
    slopes.assign(cells + 1, 0.0);
    for (int i = 0; i <= cells; ++i) slopes[i] = eval_g(lo + i * step);
    for (int i = 1; i <= cells; ++i) {
      double a = lo + (i - 1) * step;
      double b = lo + i * step;
      values[i] = values[i - 1] + adaptive_simpson(f, a, b, 1e-14);
    }
    // anchor so the antiderivative vanishes at s = 0
    double at_zero = adaptive_simpson(f, lo, 0.0, 1e-13);
    for (double& v : values) v -= at_zero;
  }

  double eval(double s) const {
    auto f = [this](double u) { return eval_g(u); };
    if (s < lo) return values.front() + adaptive_simpson(f, lo, s, 1e-12);
    if (s > hi) return values.back() + adaptive_simpson(f, hi, s, 1e-12);
    int i = std::min(static_cast<int>((s - lo) / step), cells - 1);
    double s0 = lo + i * step;
    double t = (s - s0) / step;
    double t2 = t * t;
    double t3 = t2 * t;
    double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    double h10 = t3 - 2.0 * t2 + t;
    double h01 = -2.0 * t3 + 3.0 * t2;
    double h11 = t3 - t2;
    return h00 * values[i] + h10 * step * slopes[i] + h01 * values[i + 1] +
           h11 * step * slopes[i + 1];
  }
};

Expr dot_with_point(const Vec3& v) {
  return Expr::constant(v.x) * Expr::variable(Var::X) +
         Expr::constant(v.y) * Expr::variable(Var::Y) +
         Expr::constant(v.z) * Expr::variable(Var::Z);
}

Expr gradient_magnitude(const ScalarField& f) {
  Expr gx = f.expr.diff(Var::X).simplified();
  Expr gy = f.expr.diff(Var::Y).simplified();
  Expr gz = f.expr.diff(Var::Z).simplified();
  return sqrt(pow(gx, 2) + pow(gy, 2) + pow(gz, 2)).simplified();
}

void require_admitted(const Guard& guard, const Vec3& p) {
  if (!guard.admits(p)) {
    std::ostringstream os;
    os << "guard violation: sample point (" << format_double(p.x) << ", " << format_double(p.y)
       << ", " << format_double(p.z) << ") excluded by guard \"" << guard.source() << "\"";
    throw Error(Error::Code::Guard, os.str());
  }
}

struct TripleGradients {
  VectorField ell, psi, theta;
};

TripleGradients triple_gradients(const OrthoTriple& t) {
  return {gradient(t.ell), gradient(t.psi), gradient(t.theta)};
}

int sample_jacobian_sign(const OrthoTriple& t, std::span<const Vec3> samples,
                         std::size_t min_samples) {
  if (samples.size() < min_samples) {
    throw Error(Error::Code::InvalidArgument,
                "Jacobian sign requires at least " + std::to_string(min_samples) +
                    " sample points, got " + std::to_string(samples.size()));
  }
  int sign = 0;
  for (const Vec3& p : samples) {
    require_admitted(t.guard(), p);
    double h = t.jacobian(p);
    if (h == 0.0 || !std::isfinite(h)) {
      throw Error(Error::Code::SignInconsistent,
                  "Jacobian vanishes at a sample point; coordinates are not independent there");
    }
    int s = h > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) {
      throw Error(Error::Code::SignInconsistent,
                  "Jacobian changes sign across the sample set; restrict the domain to one "
                  "sign region");
    }
  }
  return sign;
}

VectorField compose_field(const Expr& c, const VectorField& gpsi, const Expr& s,
                          const VectorField& gell, const Guard& guard) {
  return VectorField((c * gpsi.x + s * gell.x).simplified(),
                     (c * gpsi.y + s * gell.y).simplified(),
                     (c * gpsi.z + s * gell.z).simplified(), guard);
}

}  // namespace

// ---------------------------------------------------------------------------

double OrthoTriple::jacobian(const Vec3& p) const {
  VectorField ge = gradient(ell);
  VectorField gp = gradient(psi);
  VectorField gt = gradient(theta);
  return dot(ge.eval_unguarded(p), cross(gp.eval_unguarded(p), gt.eval_unguarded(p)));
}

Expr OrthoTriple::L_theta_expr() const {
  return (ell.expr * cos(theta.expr) - psi.expr * sin(theta.expr)).simplified();
}

bool ConditionReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionCheck& c) { return c.pass; });
}

const ConditionCheck* ConditionReport::find(std::string_view name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ConditionReport::text() const {
  std::ostringstream os;
  for (const auto& c : conditions) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  max residual "
       << format_double(c.max_residual) << "  worst at (" << format_double(c.worst_point.x)
       << ", " << format_double(c.worst_point.y) << ", " << format_double(c.worst_point.z)
       << ")\n";
  }
  os << (all_pass() ? "all conditions pass" : "some conditions FAIL") << " (tolerance "
     << format_double(tolerance) << ", " << point_count << " points)\n";
  return os.str();
}

ConditionReport check_construction_conditions(const OrthoTriple& t, const ScalarField& alpha,
                                              std::span<const Vec3> points, double tol) {
  TripleGradients g = triple_gradients(t);
  ConditionReport report;
  report.tolerance = tol;
  report.point_count = points.size();
  report.conditions = {{"| |grad theta| - |alpha| |", 0.0, {}, true},
                       {"| |grad ell| - |grad psi| |", 0.0, {}, true},
                       {"|grad ell . grad psi|", 0.0, {}, true},
                       {"|grad ell . grad theta|", 0.0, {}, true},
                       {"|grad psi . grad theta|", 0.0, {}, true}};
  for (const Vec3& p : points) {
    require_admitted(t.guard(), p);
    Vec3 ge = g.ell.eval_unguarded(p);
    Vec3 gp = g.psi.eval_unguarded(p);
    Vec3 gt = g.theta.eval_unguarded(p);
    double a = alpha.eval(p);
    double res[5] = {std::abs(norm(gt) - std::abs(a)), std::abs(norm(ge) - norm(gp)),
                     std::abs(dot(ge, gp)), std::abs(dot(ge, gt)), std::abs(dot(gp, gt))};
    for (int i = 0; i < 5; ++i) {
      if (res[i] > report.conditions[i].max_residual) {
        report.conditions[i].max_residual = res[i];
        report.conditions[i].worst_point = p;
      }
    }
  }
  for (auto& c : report.conditions) c.pass = c.max_residual <= tol;
  return report;
}

ConditionReport check_representation_conditions(const OrthoTriple& t,
                                                std::span<const Vec3> points, double tol) {
  TripleGradients g = triple_gradients(t);
  ConditionReport report;
  report.tolerance = tol;
  report.point_count = points.size();
  report.conditions = {{"cos sin (|grad psi|^2 - |grad ell|^2) = grad ell . grad psi (cos^2 - sin^2)",
                        0.0,
                        {},
                        true},
                       {"sin grad ell . grad theta + cos grad psi . grad theta = 0", 0.0, {}, true}};
  for (const Vec3& p : points) {
    require_admitted(t.guard(), p);
    Vec3 ge = g.ell.eval_unguarded(p);
    Vec3 gp = g.psi.eval_unguarded(p);
    Vec3 gt = g.theta.eval_unguarded(p);
    double tv = t.theta.eval(p);
    double c = std::cos(tv);
    double s = std::sin(tv);
    double r0 = std::abs(c * s * (dot(gp, gp) - dot(ge, ge)) - dot(ge, gp) * (c * c - s * s));
    double r1 = std::abs(s * dot(ge, gt) + c * dot(gp, gt));
    if (r0 > report.conditions[0].max_residual) {
      report.conditions[0].max_residual = r0;
      report.conditions[0].worst_point = p;
    }
    if (r1 > report.conditions[1].max_residual) {
      report.conditions[1].max_residual = r1;
      report.conditions[1].worst_point = p;
    }
  }
  for (auto& c : report.conditions) c.pass = c.max_residual <= tol;
  return report;
}

ConstructedPair build_beltrami(const OrthoTriple& t, std::span<const Vec3> sigma_samples) {
  int sigma = sample_jacobian_sign(t, sigma_samples, 9);
  if (t.jacobian_sign_hint && *t.jacobian_sign_hint != sigma) {
    throw Error(Error::Code::SignInconsistent,
                "sampled Jacobian sign disagrees with the triple's sign hint");
  }
  VectorField gell = gradient(t.ell);
  VectorField gpsi = gradient(t.psi);
  Expr c = cos(t.theta.expr);
  Expr s = sin(t.theta.expr);
  ConstructedPair out;
  out.sigma = sigma;
  out.w = compose_field(c, gpsi, s, gell, t.guard());
  out.w_star = compose_field(s, gpsi, c, gell, t.guard());
  out.expected_factor =
      ScalarField((Expr::constant(sigma) * gradient_magnitude(t.theta)).simplified(), t.guard());
  return out;
}

ConstructedPair build_beltrami_profile(const OrthoTriple& t, const Expr& antiderivative,
                                       std::span<const Vec3> sigma_samples) {
  int sigma = sample_jacobian_sign(t, sigma_samples, 9);
  VectorField gell = gradient(t.ell);
  VectorField gpsi = gradient(t.psi);
  Expr rotated = antiderivative.substituted(Var::X, t.theta.expr).simplified();
  Expr slope = antiderivative.diff(Var::X).simplified().substituted(Var::X, t.theta.expr);
  Expr c = cos(rotated);
  Expr s = sin(rotated);
  ConstructedPair out;
  out.sigma = sigma;
  out.w = compose_field(c, gpsi, s, gell, t.guard());
  out.w_star = compose_field(s, gpsi, c, gell, t.guard());
  out.expected_factor = ScalarField(
      (Expr::constant(sigma) * gradient_magnitude(t.theta) * slope).simplified(), t.guard());
  return out;
}

RatioField build_beltrami_ratio(const ScalarField& alpha_c, const ScalarField& beta_c,
                                const ScalarField& gamma_c, const Expr& f,
                                std::span<const Vec3> samples, double tol) {
  OrthoTriple t{alpha_c, beta_c, gamma_c, std::nullopt};
  VectorField ga = gradient(alpha_c);
  VectorField gb = gradient(beta_c);
  VectorField gg = gradient(gamma_c);
  double worst = 0.0;
  for (const Vec3& p : samples) {
    require_admitted(t.guard(), p);
    Vec3 a = ga.eval_unguarded(p);
    Vec3 b = gb.eval_unguarded(p);
    Vec3 g = gg.eval_unguarded(p);
    worst = std::max({worst, std::abs(dot(a, b)), std::abs(dot(a, g)), std::abs(dot(b, g)),
                      std::abs(norm(a) - norm(b))});
  }
  if (worst > tol) {
    throw Error(Error::Code::ConditionFailed,
                "coordinates fail orthogonality / equal-scale-factor check (max residual " +
                    format_double(worst) + ", tolerance " + format_double(tol) + ")");
  }
  int sigma = sample_jacobian_sign(t, samples, 1);

  Expr fg = f.substituted(Var::X, gamma_c.expr).simplified();
  Expr one_plus_f2 = (Expr::constant(1.0) + pow(fg, 2)).simplified();
  Expr root = sqrt(one_plus_f2);
  RatioField out;
  out.sigma = sigma;
  out.w = VectorField(((gb.x + fg * ga.x) / root).simplified(),
                      ((gb.y + fg * ga.y) / root).simplified(),
                      ((gb.z + fg * ga.z) / root).simplified(), t.guard());
  // The factor follows from the substitution tau = arctan f applied to the
  // rotation form: d tau / d gamma = f'/(1 + f^2).
  Expr fprime = f.diff(Var::X).simplified().substituted(Var::X, gamma_c.expr);
  out.expected_factor = ScalarField(
      (Expr::constant(sigma) * gradient_magnitude(gamma_c) * fprime / one_plus_f2).simplified(),
      t.guard());
  return out;
}

PlanarFrame planar_frame(const Vec3& n_in, const Expr& g_profile,
                         const std::optional<Expr>& antiderivative, double s_min, double s_max) {
  if (norm(n_in) == 0.0)
    throw Error(Error::Code::InvalidArgument, "planar frame normal must be nonzero");
  if (s_max <= s_min)
    throw Error(Error::Code::InvalidArgument, "planar frame needs s_min < s_max");
  Vec3 n = normalized(n_in);
  Vec3 a = std::abs(n.z) > 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 0.0, 1.0};
  Vec3 e1 = normalized(cross(n, a));
  Vec3 e2 = cross(n, e1);

  Expr s_expr = dot_with_point(n).simplified();
  Expr g_of_s = g_profile.substituted(Var::X, s_expr).simplified();

  PlanarFrame frame;
  frame.n = n;
  frame.e1 = e1;
  frame.e2 = e2;

  // alpha = g(n . x) must keep one sign over the working interval
  frame.min_abs_g = std::numeric_limits<double>::infinity();
  int sign = 0;
  const int probes = 4096;
  for (int i = 0; i <= probes; ++i) {
    double s = s_min + (s_max - s_min) * i / probes;
    double gv = g_profile.eval(Vec3{s, 0.0, 0.0});
    frame.min_abs_g = std::min(frame.min_abs_g, std::abs(gv));
    int sgn = gv > 0.0 ? 1 : (gv < 0.0 ? -1 : 0);
    if (sgn == 0) frame.g_sign_change = true;
    if (sign == 0) sign = sgn;
    else if (sgn != 0 && sgn != sign) frame.g_sign_change = true;
  }

  Expr theta;
  if (antiderivative) {
    theta = antiderivative->substituted(Var::X, s_expr).simplified();
  } else {
    auto cache = std::make_shared<ProfileCache>();
    cache->build(g_profile, s_min, s_max, 2048);
    Vec3 nn = n;
    theta = Expr::external(
        "quadrature antiderivative of " + g_profile.str() + " along n.x",
        [cache, nn](const Vec3& p) { return cache->eval(dot(nn, p)); },
        {(g_of_s * Expr::constant(n.x)).simplified(), (g_of_s * Expr::constant(n.y)).simplified(),
         (g_of_s * Expr::constant(n.z)).simplified()});
  }

  frame.triple.ell = ScalarField(dot_with_point(e1).simplified());
  frame.triple.psi = ScalarField(dot_with_point(e2).simplified());
  frame.triple.theta = ScalarField(std::move(theta));
  if (!frame.g_sign_change && sign != 0) frame.triple.jacobian_sign_hint = sign;
  return frame;
}

ScalarField harmonic_conjugate(const ScalarField& ell2d, const Vec3& anchor) {
  const Expr& ell = ell2d.expr;
  Expr lx = ell.diff(Var::X).simplified();
  Expr ly = ell.diff(Var::Y).simplified();
  Expr lz = ell.diff(Var::Z).simplified();
  Expr lap = (lx.diff(Var::X) + ly.diff(Var::Y)).simplified();

  // pre: two-dimensional and harmonic, checked on a deterministic sample
  std::vector<Vec3> probes = sample_box(Box{anchor + Vec3{-1, -1, 0}, anchor + Vec3{1, 1, 0}},
                                        48, 0x9e3779b97f4a7c15ull, ell2d.guard);
  double scale = 0.0;
  for (const Vec3& p : probes)
    scale = std::max({scale, std::abs(lx.eval(p)), std::abs(ly.eval(p))});
  for (const Vec3& p : probes) {
    if (std::abs(lz.eval(p)) > 1e-8 * (1.0 + scale))
      throw Error(Error::Code::ConditionFailed,
                  "harmonic_conjugate input depends on z; need ell = ell(x, y)");
    if (std::abs(lap.eval(p)) > 1e-8 * (1.0 + scale))
      throw Error(Error::Code::ConditionFailed,
                  "harmonicity check failed: laplacian(ell) exceeds 1e-8 at (" +
                      format_double(p.x) + ", " + format_double(p.y) + ")");
  }

  // psi_x = -ell_y, psi_y = ell_x; this sign makes (grad ell, grad psi, z)
  // right-handed since grad ell x grad psi . z = |grad ell|^2.
  Expr psi_x = (-ly).simplified();
  Expr psi_y = lx;
  double az = anchor.z;

  auto integrate = [psi_x, psi_y, az](const Vec3& from, const Vec3& to, bool x_first) {
    auto leg_x = [&](double y, double xa, double xb) {
      auto f = [&](double t) { return psi_x.eval(Vec3{t, y, az}); };
      return adaptive_simpson(f, xa, xb, 1e-12);
    };
    auto leg_y = [&](double x, double ya, double yb) {
      auto f = [&](double t) { return psi_y.eval(Vec3{x, t, az}); };
      return adaptive_simpson(f, ya, yb, 1e-12);
    };
    if (x_first) return leg_x(from.y, from.x, to.x) + leg_y(to.x, from.y, to.y);
    return leg_y(from.x, from.y, to.y) + leg_x(to.y, from.x, to.x);
  };

  // path independence across the two L-routes
  for (const Vec3& p : {anchor + Vec3{0.8, 0.6, 0}, anchor + Vec3{-0.7, 0.9, 0},
                        anchor + Vec3{0.5, -0.8, 0}, anchor + Vec3{-0.6, -0.5, 0}}) {
    double a = integrate(anchor, p, true);
    double b = integrate(anchor, p, false);
    if (std::abs(a - b) > 1e-8 * (1.0 + std::abs(a)))
      throw Error(Error::Code::ConditionFailed,
                  "conjugate line integral is path dependent (routes differ by " +
                      format_double(std::abs(a - b)) + ")");
  }

  Vec3 anchor_copy = anchor;
  Expr value = Expr::external(
      "harmonic conjugate of " + ell.str(),
      [integrate, anchor_copy](const Vec3& p) { return integrate(anchor_copy, p, true); },
      {psi_x, psi_y, Expr::constant(0.0)});
  return ScalarField(std::move(value), ell2d.guard);
}

OrthoTriple catalog_chart(ChartName name) {
  switch (name) {
    case ChartName::Cylindrical: {
      Guard guard = Guard::parse("x^2 + y^2 >= 0.0025 and (x > 0.05 or y^2 > 0.0025)");
      OrthoTriple t;
      t.ell = ScalarField(Expr::parse("sqrt(x^2 + y^2)"), guard);
      t.psi = ScalarField(Expr::parse("z"), guard);
      t.theta = ScalarField(Expr::parse("atan2(y, x)"), guard);
      return t;
    }
    case ChartName::ParabolicCylindrical: {
      Guard guard = Guard::parse(
          "x^2 + y^2 >= 0.0025 and sqrt(x^2 + y^2) - x >= 0.0025 and sqrt(x^2 + y^2) + x >= "
          "0.0025");
      OrthoTriple t;
      t.ell = ScalarField(Expr::parse("sqrt(sqrt(x^2 + y^2) + x)"), guard);
      t.psi = ScalarField(Expr::parse("sqrt(sqrt(x^2 + y^2) - x)"), guard);
      t.theta = ScalarField(Expr::parse("z"), guard);
      return t;
    }
    case ChartName::Parabolic: {
      Guard guard = Guard::parse(
          "x^2 + y^2 + z^2 >= 0.0025 and x^2 + y^2 >= 0.0025 and sqrt(x^2 + y^2 + z^2) + z >= "
          "0.0025 and sqrt(x^2 + y^2 + z^2) - z >= 0.0025 and (x > 0.05 or y^2 > 0.0025)");
      OrthoTriple t;
      t.ell = ScalarField(Expr::parse("sqrt(sqrt(x^2 + y^2 + z^2) + z)"), guard);
      t.psi = ScalarField(Expr::parse("sqrt(sqrt(x^2 + y^2 + z^2) - z)"), guard);
      t.theta = ScalarField(Expr::parse("atan2(y, x)"), guard);
      return t;
    }
  }
  throw Error(Error::Code::UnknownId, "unknown chart");
}

OrthoTriple catalog_chart(std::string_view name) {
  if (name == "cylindrical") return catalog_chart(ChartName::Cylindrical);
  if (name == "parabolic_cylindrical") return catalog_chart(ChartName::ParabolicCylindrical);
  if (name == "parabolic") return catalog_chart(ChartName::Parabolic);
  throw Error(Error::Code::UnknownId,
              "unknown chart '" + std::string(name) +
                  "' (expected cylindrical, parabolic_cylindrical or parabolic)");
}

}  // namespace beltrami
