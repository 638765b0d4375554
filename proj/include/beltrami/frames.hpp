#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/fields.hpp"

namespace beltrami {

/// Candidate coordinate functions (ell, psi, theta). The constructor
/// expects them orthogonal with |grad ell| = |grad psi|; theta's gradient
/// magnitude plays the role of |alpha|.
struct OrthoTriple {
  ScalarField ell, psi, theta;
  std::optional<int> jacobian_sign_hint;

  const Guard& guard() const { return ell.guard; }

  /// Jacobian h = grad(ell) . grad(psi) x grad(theta) at p.
  double jacobian(const Vec3& p) const;

  /// ell*cos(theta) - psi*sin(theta).
  Expr L_theta_expr() const;
};

struct ConditionCheck {
  std::string name;
  double max_residual = 0.0;
  Vec3 worst_point;
  bool pass = false;
};

struct ConditionReport {
  std::vector<ConditionCheck> conditions;
  double tolerance = 0.0;
  std::size_t point_count = 0;

  bool all_pass() const;
  const ConditionCheck* find(std::string_view name) const;
  std::string text() const;
};

/// Residuals of the five construction conditions
///   | |grad theta| - |alpha| |, | |grad ell| - |grad psi| |,
///   grad ell . grad psi, grad ell . grad theta, grad psi . grad theta
/// over the sample set.
ConditionReport check_construction_conditions(const OrthoTriple& t, const ScalarField& alpha,
                                              std::span<const Vec3> points, double tol = 1e-9);

/// Residuals of the two representation conditions
///   cos t sin t (|grad psi|^2 - |grad ell|^2) - (grad ell . grad psi)(cos^2 t - sin^2 t)
///   sin t grad ell . grad theta + cos t grad psi . grad theta
/// (weaker than full orthogonality).
ConditionReport check_representation_conditions(const OrthoTriple& t,
                                                std::span<const Vec3> points, double tol = 1e-9);

/// Output of the constructor: w = cos(theta) grad psi + sin(theta) grad ell
/// and its companion w* = sin(theta) grad psi + cos(theta) grad ell, with
/// curl w = +expected_factor * w and curl w* = -expected_factor * w*.
struct ConstructedPair {
  VectorField w;
  VectorField w_star;
  int sigma = 1;
  ScalarField expected_factor;  // sigma * |grad theta| (times the profile slope, when given)
};

/// sigma is the sign of the Jacobian sampled at `sigma_samples` (at least
/// 9 points); an inconsistent or vanishing sign is an error.
ConstructedPair build_beltrami(const OrthoTriple& t, std::span<const Vec3> sigma_samples);

/// Generalised constructor with rotation profile F (an expression in the
/// profile variable s, the antiderivative of the desired f): the field is
/// cos(F(theta)) grad psi + sin(F(theta)) grad ell, and the expected
/// factor picks up f(theta) = F'(theta).
ConstructedPair build_beltrami_profile(const OrthoTriple& t, const Expr& antiderivative,
                                       std::span<const Vec3> sigma_samples);

struct RatioField {
  VectorField w;
  int sigma = 1;
  ScalarField expected_factor;  // sigma |grad gamma| f'(gamma) / sqrt(1 + f^2)
};

/// w = (1+f^2)^(-1/2) grad beta + f (1+f^2)^(-1/2) grad alpha with
/// f = f(gamma); the triple must be orthogonal with equal first two scale
/// factors (checked at `samples` against `tol`).
RatioField build_beltrami_ratio(const ScalarField& alpha_c, const ScalarField& beta_c,
                                const ScalarField& gamma_c, const Expr& f,
                                std::span<const Vec3> samples, double tol = 1e-9);

/// Planar eikonal reduction: alpha depends only on s = n.x. Returns
/// ell = e1.x, psi = e2.x and theta = G(n.x), where G' = g. With no
/// closed-form antiderivative, G comes from adaptive Simpson quadrature
/// cached on a 1D grid (Hermite-interpolated); its gradient stays exact.
struct PlanarFrame {
  OrthoTriple triple;
  Vec3 e1, e2, n;
  bool g_sign_change = false;  // reported: alpha must not change sign
  double min_abs_g = 0.0;      // over the working interval
};

PlanarFrame planar_frame(const Vec3& n, const Expr& g_profile,
                         const std::optional<Expr>& antiderivative = std::nullopt,
                         double s_min = -4.0, double s_max = 4.0);

/// Harmonic conjugate of a 2D harmonic ell(x, y): psi with
/// psi_x = -ell_y, psi_y = ell_x (the sign making (grad ell, grad psi, z)
/// right-handed) and psi(anchor) = 0, evaluated by line integral from the
/// anchor. Harmonicity and path independence are verified at construction.
ScalarField harmonic_conjugate(const ScalarField& ell2d, const Vec3& anchor);

enum class ChartName { Cylindrical, ParabolicCylindrical, Parabolic };

/// Built-in orthogonal charts with guards at their coordinate
/// singularities. Scale factors: cylindrical (1, 1, 1/r);
/// parabolic cylindrical |grad u| = |grad v| = 1/sqrt(2r);
/// parabolic |grad xi| = |grad eta| = 1/sqrt(2 rho).
OrthoTriple catalog_chart(ChartName name);
OrthoTriple catalog_chart(std::string_view name);

}  // namespace beltrami
