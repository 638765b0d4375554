#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "beltrami/vec3.hpp"

namespace beltrami {

enum class Var : int { X = 0, Y = 1, Z = 2 };

/// Error with a machine-readable category, used across the library and
/// mapped onto C API status codes.
class Error : public std::runtime_error {
 public:
  enum class Code {
    Parse,
    Domain,
    Guard,
    Schema,
    InvalidArgument,
    ConditionFailed,
    SignInconsistent,
    UnknownId,
    Io,
    StepUnderflow,
  };

  Error(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Syntax error carrying the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(Code::Parse, message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable expression tree over (x, y, z). Copies are cheap (shared
/// subtrees); evaluation is pure and safe to run from many threads.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);

  /// Parses the expression grammar (see README). Variables are x, y, z.
  static Expr parse(std::string_view source);

  /// Parses a univariate profile expression whose only variable is
  /// `var_name` (e.g. "s"); the variable is stored as Var::X so the
  /// profile can later be composed via substituted().
  static Expr parse_profile(std::string_view source, std::string_view var_name = "s");

  /// Opaque numeric leaf: `eval` supplies the value, `gradient` the exact
  /// partial derivatives. Used for quadrature- or line-integral-backed
  /// scalars whose derivatives are known in closed form.
  static Expr external(std::string name, std::function<double(const Vec3&)> eval,
                       std::array<Expr, 3> gradient);

  double eval(const Vec3& p) const;

  /// Exact partial derivative.
  Expr diff(Var v) const;

  /// Constant folding and identity elimination; pointwise value-preserving
  /// wherever the input is defined.
  Expr simplified() const;

  /// Replaces every occurrence of `v` by `replacement`.
  Expr substituted(Var v, const Expr& replacement) const;

  /// Canonical text form; parse(str()) is structurally identical for any
  /// tree free of external leaves.
  std::string str() const;

  bool same_structure(const Expr& other) const;

  /// True when the tree is a plain constant (value stored in *value).
  bool is_constant(double* value = nullptr) const;

  /// Structural dependence (may be conservative: a tree that cancels to a
  /// constant still reports its variables).
  bool depends_on(Var v) const;

  /// True when the tree contains an external leaf (not grammar-printable).
  bool has_external() const;

  // Combinators. All take and return whole trees.
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr atan(const Expr& a);
  friend Expr atan2(const Expr& y, const Expr& x);
  friend Expr pow(const Expr& base, long long num, long long den);

  const detail::NodePtr& node() const { return node_; }

 private:
  explicit Expr(detail::NodePtr node) : node_(std::move(node)) {}

  detail::NodePtr node_;
};

inline Expr pow(const Expr& base, long long exponent) {
  return pow(base, exponent, 1);
}

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace beltrami
