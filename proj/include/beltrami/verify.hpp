#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beltrami/fields.hpp"
#include "beltrami/frames.hpp"

namespace beltrami {

enum class FieldClass { NontrivialBeltrami, ComplexLamellar, Neither, Degenerate };

const char* to_string(FieldClass c);

struct HhatSample {
  Vec3 point;
  double value;
};

/// Verification summary over a sample set. The alignment residual is
/// ||w x curl w|| / (||w|| ||curl w|| + eps), the sine of the angle
/// between the field and its curl, so thresholds are scale-free.
struct BeltramiReport {
  double max_alignment_residual = 0.0;
  Vec3 worst_alignment_point;
  std::vector<HhatSample> hhat_samples;
  double hhat_min_abs = 0.0;
  double hhat_mean = 0.0;
  double hhat_variance = 0.0;
  bool strong_beltrami = false;  // sample variance of hhat <= 1e-12
  std::optional<double> hhat_expected_residual;
  double divergence_max = 0.0;
  Vec3 worst_divergence_point;
  std::optional<double> divergence_expected_residual;
  FieldClass classification = FieldClass::Neither;
  std::size_t point_count = 0;
  double tolerance = 0.0;

  bool pass() const;
  std::string text() const;
};

/// Residuals, pointwise proportionality factors and classification over
/// `points`. When expected fields are supplied, the report also carries
/// max |extracted - expected| / (1 + |expected|).
BeltramiReport beltrami_residual(const VectorField& w, std::span<const Vec3> points,
                                 double tol = 1e-8,
                                 const std::optional<ScalarField>& expected_hhat = std::nullopt,
                                 const std::optional<ScalarField>& expected_div = std::nullopt);

/// hhat = (w . curl w) / |w|^2 at p; |w| below 1e-12 is an error.
double proportionality_factor(const VectorField& w, const Vec3& p);

/// hhat as an expression, (w . curl w) / |w|^2.
Expr hhat_expr(const VectorField& w);

FieldClass classify(const VectorField& w, std::span<const Vec3> points);

struct InvariantResiduals {
  double theta = 0.0;
  double L_theta = 0.0;
  double max() const { return theta > L_theta ? theta : L_theta; }
};

/// max |w . grad theta| and |w . grad L_theta| with
/// L_theta = ell cos theta - psi sin theta.
InvariantResiduals invariant_gradient_check(const VectorField& w, const OrthoTriple& t,
                                            std::span<const Vec3> points);

/// max componentwise |hhat w - grad theta x grad L_theta|.
double nambu_identity_check(const VectorField& w, const OrthoTriple& t,
                            std::span<const Vec3> points);

/// Ideal-gas steady continuity: rho = exp((c - w^2/2)/k); returns
/// max |div(rho w)| over the points.
double continuity_check_ideal_gas(const VectorField& w, double k, double c,
                                  std::span<const Vec3> points);

}  // namespace beltrami
