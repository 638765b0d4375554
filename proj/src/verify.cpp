#include "beltrami/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace beltrami {
namespace {

constexpr double kDenominatorFloor = 1e-300;
constexpr double kClassAlignmentTol = 1e-8;
constexpr double kClassHelicityTol = 1e-8;
constexpr double kDegenerateCurlTol = 1e-12;
constexpr double kMinFieldMagnitude = 1e-12;
constexpr double kStrongVarianceTol = 1e-12;

void require_admitted(const Guard& guard, const Vec3& p) {
  if (!guard.admits(p)) {
    std::ostringstream os;
    os << "guard violation: point (" << format_double(p.x) << ", " << format_double(p.y) << ", "
       << format_double(p.z) << ") excluded by guard \"" << guard.source() << "\"";
    throw Error(Error::Code::Guard, os.str());
  }
}

struct PointScan {
  double max_alignment = 0.0;
  Vec3 worst_alignment;
  double max_curl_norm = 0.0;
  double max_normalized_h = 0.0;
  std::vector<HhatSample> hhat;
};

PointScan scan_points(const VectorField& w, const VectorField& c, std::span<const Vec3> points) {
  PointScan out;
  out.hhat.reserve(points.size());
  for (const Vec3& p : points) {
    require_admitted(w.guard, p);
    Vec3 wv = w.eval_unguarded(p);
    Vec3 cv = c.eval_unguarded(p);
    double wn = norm(wv);
    double cn = norm(cv);
    double den = wn * cn + kDenominatorFloor;
    double alignment = norm(cross(wv, cv)) / den;
    if (alignment > out.max_alignment) {
      out.max_alignment = alignment;
      out.worst_alignment = p;
    }
    double h = dot(wv, cv);
    out.max_curl_norm = std::max(out.max_curl_norm, cn);
    out.max_normalized_h = std::max(out.max_normalized_h, std::abs(h) / den);
    if (wn > kMinFieldMagnitude) out.hhat.push_back({p, h / (wn * wn)});
  }
  return out;
}

FieldClass classify_scan(const PointScan& s) {
  if (s.max_curl_norm <= kDegenerateCurlTol) return FieldClass::Degenerate;
  if (s.max_normalized_h <= kClassHelicityTol) return FieldClass::ComplexLamellar;
  double min_abs = std::numeric_limits<double>::infinity();
  for (const auto& hs : s.hhat) min_abs = std::min(min_abs, std::abs(hs.value));
  if (s.max_alignment <= kClassAlignmentTol && !s.hhat.empty() && min_abs > kClassHelicityTol)
    return FieldClass::NontrivialBeltrami;
  return FieldClass::Neither;
}

}  // namespace

const char* to_string(FieldClass c) {
  switch (c) {
    case FieldClass::NontrivialBeltrami: return "nontrivial_beltrami";
    case FieldClass::ComplexLamellar: return "complex_lamellar";
    case FieldClass::Neither: return "neither";
    case FieldClass::Degenerate: return "degenerate";
  }
  return "?";
}

bool BeltramiReport::pass() const {
  if (max_alignment_residual > tolerance) return false;
  if (hhat_expected_residual && *hhat_expected_residual > tolerance) return false;
  if (divergence_expected_residual && *divergence_expected_residual > tolerance) return false;
  return true;
}

std::string BeltramiReport::text() const {
  std::ostringstream os;
  os << "points sampled          " << point_count << "\n";
  os << "alignment residual max  " << format_double(max_alignment_residual) << "  at ("
     << format_double(worst_alignment_point.x) << ", " << format_double(worst_alignment_point.y)
     << ", " << format_double(worst_alignment_point.z) << ")\n";
  os << "classification          " << to_string(classification) << "\n";
  if (!hhat_samples.empty()) {
    os << "hhat mean               " << format_double(hhat_mean) << "  variance "
       << format_double(hhat_variance) << (strong_beltrami ? "  (strong Beltrami)" : "") << "\n";
    os << "hhat min |value|        " << format_double(hhat_min_abs) << "\n";
  }
  if (hhat_expected_residual)
    os << "hhat vs expected        " << format_double(*hhat_expected_residual) << "\n";
  os << "divergence max          " << format_double(divergence_max) << "\n";
  if (divergence_expected_residual)
    os << "divergence vs expected  " << format_double(*divergence_expected_residual) << "\n";
  os << "verdict                 " << (pass() ? "pass" : "FAIL") << " (tolerance "
     << format_double(tolerance) << ")\n";
  return os.str();
}

BeltramiReport beltrami_residual(const VectorField& w, std::span<const Vec3> points, double tol,
                                 const std::optional<ScalarField>& expected_hhat,
                                 const std::optional<ScalarField>& expected_div) {
  VectorField c = curl(w);
  ScalarField div = divergence(w);
  PointScan scan = scan_points(w, c, points);

  BeltramiReport report;
  report.tolerance = tol;
  report.point_count = points.size();
  report.max_alignment_residual = scan.max_alignment;
  report.worst_alignment_point = scan.worst_alignment;
  report.classification = classify_scan(scan);
  report.hhat_samples = std::move(scan.hhat);

  if (!report.hhat_samples.empty()) {
    double mean = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& s : report.hhat_samples) {
      mean += s.value;
      min_abs = std::min(min_abs, std::abs(s.value));
    }
    mean /= static_cast<double>(report.hhat_samples.size());
    double var = 0.0;
    for (const auto& s : report.hhat_samples) var += (s.value - mean) * (s.value - mean);
    var /= static_cast<double>(report.hhat_samples.size());
    report.hhat_mean = mean;
    report.hhat_variance = var;
    report.hhat_min_abs = min_abs;
    report.strong_beltrami = var <= kStrongVarianceTol;
  }

  if (expected_hhat) {
    double worst = 0.0;
    for (const auto& s : report.hhat_samples) {
      double e = expected_hhat->eval(s.point);
      worst = std::max(worst, std::abs(s.value - e) / (1.0 + std::abs(e)));
    }
    report.hhat_expected_residual = worst;
  }

  for (const Vec3& p : points) {
    double d = std::abs(div.expr.eval(p));
    if (d > report.divergence_max) {
      report.divergence_max = d;
      report.worst_divergence_point = p;
    }
  }
  if (expected_div) {
    double worst = 0.0;
    for (const Vec3& p : points) {
      double e = expected_div->eval(p);
      double d = div.expr.eval(p);
      worst = std::max(worst, std::abs(d - e) / (1.0 + std::abs(e)));
    }
    report.divergence_expected_residual = worst;
  }
  return report;
}

double proportionality_factor(const VectorField& w, const Vec3& p) {
  require_admitted(w.guard, p);
  Vec3 wv = w.eval_unguarded(p);
  double w2 = dot(wv, wv);
  if (w2 <= kMinFieldMagnitude * kMinFieldMagnitude) {
    throw Error(Error::Code::InvalidArgument,
                "proportionality factor undefined: |w| <= 1e-12 at the requested point");
  }
  VectorField c = curl(w);
  return dot(wv, c.eval_unguarded(p)) / w2;
}

Expr hhat_expr(const VectorField& w) {
  VectorField c = curl(w);
  Expr h = (w.x * c.x + w.y * c.y + w.z * c.z).simplified();
  return (h / magnitude_squared(w)).simplified();
}

FieldClass classify(const VectorField& w, std::span<const Vec3> points) {
  VectorField c = curl(w);
  return classify_scan(scan_points(w, c, points));
}

InvariantResiduals invariant_gradient_check(const VectorField& w, const OrthoTriple& t,
                                            std::span<const Vec3> points) {
  VectorField gtheta = gradient(t.theta);
  VectorField gL = gradient(ScalarField(t.L_theta_expr(), t.guard()));
  InvariantResiduals out;
  for (const Vec3& p : points) {
    require_admitted(w.guard, p);
    require_admitted(t.guard(), p);
    Vec3 wv = w.eval_unguarded(p);
    out.theta = std::max(out.theta, std::abs(dot(wv, gtheta.eval_unguarded(p))));
    out.L_theta = std::max(out.L_theta, std::abs(dot(wv, gL.eval_unguarded(p))));
  }
  return out;
}

double nambu_identity_check(const VectorField& w, const OrthoTriple& t,
                            std::span<const Vec3> points) {
  VectorField c = curl(w);
  VectorField gtheta = gradient(t.theta);
  VectorField gL = gradient(ScalarField(t.L_theta_expr(), t.guard()));
  double worst = 0.0;
  for (const Vec3& p : points) {
    require_admitted(w.guard, p);
    require_admitted(t.guard(), p);
    Vec3 wv = w.eval_unguarded(p);
    double w2 = dot(wv, wv);
    if (w2 <= kMinFieldMagnitude * kMinFieldMagnitude) continue;
    double hhat = dot(wv, c.eval_unguarded(p)) / w2;
    Vec3 lhs = hhat * wv;
    Vec3 rhs = cross(gtheta.eval_unguarded(p), gL.eval_unguarded(p));
    worst = std::max(worst, norm_inf(lhs - rhs));
  }
  return worst;
}

double continuity_check_ideal_gas(const VectorField& w, double k, double c,
                                  std::span<const Vec3> points) {
  if (k <= 0.0)
    throw Error(Error::Code::InvalidArgument, "ideal gas constant k must be positive");
  Expr w2 = magnitude_squared(w);
  Expr rho = exp((Expr::constant(c) - w2 / Expr::constant(2.0)) / Expr::constant(k));
  VectorField grad_rho = gradient(ScalarField(rho, w.guard));
  ScalarField div_w = divergence(w);
  double worst = 0.0;
  for (const Vec3& p : points) {
    require_admitted(w.guard, p);
    double residual = dot(grad_rho.eval_unguarded(p), w.eval_unguarded(p)) +
                      rho.eval(p) * div_w.expr.eval(p);
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

}  // namespace beltrami
