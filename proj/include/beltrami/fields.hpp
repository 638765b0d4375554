#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/expr.hpp"
#include "beltrami/vec3.hpp"

namespace beltrami {

namespace detail {
struct GuardNode;
}

/// Declarative point predicate excluding singular loci, e.g.
/// "x^2 + y^2 >= 0.0025 and (x > 0.05 or y^2 > 0.0025)".
/// Comparisons use the expression grammar; 'and' binds tighter than 'or'.
class Guard {
 public:
  Guard();  // admits everything
  static Guard none() { return Guard(); }
  static Guard parse(std::string_view source);

  /// False when the point is excluded, or when a guard expression is
  /// itself undefined there.
  bool admits(const Vec3& p) const;

  bool is_none() const { return !root_; }
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const detail::GuardNode> root_;
  std::string source_ = "none";
};

/// Closed-form scalar field with a domain guard.
struct ScalarField {
  Expr expr;
  Guard guard;

  ScalarField() = default;
  ScalarField(Expr e, Guard g = Guard::none()) : expr(std::move(e)), guard(std::move(g)) {}
  explicit ScalarField(std::string_view source, Guard g = Guard::none())
      : expr(Expr::parse(source)), guard(std::move(g)) {}

  /// Throws Error::Code::Guard when the point is excluded.
  double eval(const Vec3& p) const;
};

/// Vector field as a component triple sharing one guard.
struct VectorField {
  Expr x, y, z;
  Guard guard;

  VectorField() = default;
  VectorField(Expr wx, Expr wy, Expr wz, Guard g = Guard::none())
      : x(std::move(wx)), y(std::move(wy)), z(std::move(wz)), guard(std::move(g)) {}

  const Expr& component(int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 eval(const Vec3& p) const;
  Vec3 eval_unguarded(const Vec3& p) const;
};

VectorField gradient(const ScalarField& f);
VectorField curl(const VectorField& w);
ScalarField divergence(const VectorField& w);
ScalarField laplacian(const ScalarField& f);

/// w . (curl w) evaluated at p.
double helicity_density(const VectorField& w, const Vec3& p);

/// |w|^2 as an expression.
Expr magnitude_squared(const VectorField& w);

/// Central-difference curl, O(h^2); the independent oracle for the exact
/// operators. The 2h-ball around p must pass the guard.
Vec3 fd_curl(const VectorField& w, const Vec3& p, double h = 1e-4);

/// Five-point stencil variant, O(h^4), for cross-checks.
Vec3 fd_curl4(const VectorField& w, const Vec3& p, double h = 1e-4);

/// Central-difference gradient of a scalar field, O(h^2).
Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h = 1e-4);

/// Deterministic guarded sampling: uniform draws from `box`, rejecting
/// points the guard excludes. Throws when the guard rejects nearly all
/// draws.
std::vector<Vec3> sample_box(const Box& box, std::size_t count, std::uint64_t seed,
                             const Guard& guard = Guard::none());

}  // namespace beltrami
