#include "beltrami/fields.hpp"

#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

namespace beltrami {
namespace detail {

enum class GuardKind { And, Or, Cmp };
enum class CmpOp { Lt, Le, Gt, Ge };

struct GuardNode {
  GuardKind kind = GuardKind::Cmp;
  std::shared_ptr<const GuardNode> a, b;
  Expr lhs, rhs;
  CmpOp op = CmpOp::Lt;
};

namespace {

using GuardPtr = std::shared_ptr<const GuardNode>;

// guard := or ; or := and ('or' and)* ; and := cmp ('and' cmp)*
// cmp   := '(' or ')' | expr rel expr ; rel in {<, <=, >, >=}
class GuardParser {
 public:
  explicit GuardParser(std::string_view src) : src_(src) {}

  GuardPtr run() {
    GuardPtr g = parse_or();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input in guard", pos_);
    return g;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat_word(std::string_view word) {
    skip_ws();
    if (src_.substr(pos_).starts_with(word)) {
      std::size_t end = pos_ + word.size();
      // must be a whole word
      if (end == src_.size() || !std::isalnum(static_cast<unsigned char>(src_[end]))) {
        pos_ = end;
        return true;
      }
    }
    return false;
  }

  GuardPtr parse_or() {
    GuardPtr g = parse_and();
    while (eat_word("or")) {
      auto n = std::make_shared<GuardNode>();
      n->kind = GuardKind::Or;
      n->a = std::move(g);
      n->b = parse_and();
      g = std::move(n);
    }
    return g;
  }

  GuardPtr parse_and() {
    GuardPtr g = parse_cmp();
    while (eat_word("and")) {
      auto n = std::make_shared<GuardNode>();
      n->kind = GuardKind::And;
      n->a = std::move(g);
      n->b = parse_cmp();
      g = std::move(n);
    }
    return g;
  }

  GuardPtr parse_cmp() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      // Either a parenthesised boolean clause or a parenthesised
      // arithmetic expression; try the boolean reading first.
      std::size_t mark = pos_;
      ++pos_;
      try {
        GuardPtr inner = parse_or();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ')') {
          ++pos_;
          return inner;
        }
      } catch (const Error&) {
      }
      pos_ = mark;
    }
    // expr rel expr: find the comparison operator at depth 0
    std::size_t start = pos_;
    int depth = 0;
    std::size_t rel_pos = std::string_view::npos;
    for (std::size_t i = pos_; i < src_.size(); ++i) {
      char c = src_[i];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && (c == '<' || c == '>')) {
        rel_pos = i;
        break;
      } else if (depth == 0 && (src_.substr(i).starts_with(" and ") ||
                                src_.substr(i).starts_with(" or "))) {
        break;
      }
    }
    if (rel_pos == std::string_view::npos)
      throw ParseError("expected comparison operator in guard", pos_);
    CmpOp op;
    std::size_t rel_len = 1;
    if (src_[rel_pos] == '<') {
      op = CmpOp::Lt;
      if (rel_pos + 1 < src_.size() && src_[rel_pos + 1] == '=') {
        op = CmpOp::Le;
        rel_len = 2;
      }
    } else {
      op = CmpOp::Gt;
      if (rel_pos + 1 < src_.size() && src_[rel_pos + 1] == '=') {
        op = CmpOp::Ge;
        rel_len = 2;
      }
    }
    Expr lhs = Expr::parse(src_.substr(start, rel_pos - start));
    // rhs extends to the next 'and'/'or' keyword or closing paren at depth 0
    std::size_t rhs_start = rel_pos + rel_len;
    std::size_t rhs_end = rhs_start;
    depth = 0;
    while (rhs_end < src_.size()) {
      char c = src_[rhs_end];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && (src_.substr(rhs_end).starts_with(" and ") ||
                                src_.substr(rhs_end).starts_with(" or ") ||
                                (rhs_end + 4 == src_.size() && src_.substr(rhs_end).starts_with(" and")) ||
                                (rhs_end + 3 == src_.size() && src_.substr(rhs_end).starts_with(" or")))) {
        break;
      }
      ++rhs_end;
    }
    Expr rhs = Expr::parse(src_.substr(rhs_start, rhs_end - rhs_start));
    pos_ = rhs_end;
    auto n = std::make_shared<GuardNode>();
    n->kind = GuardKind::Cmp;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->op = op;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

bool guard_eval(const GuardNode& n, const Vec3& p) {
  switch (n.kind) {
    case GuardKind::And:
      return guard_eval(*n.a, p) && guard_eval(*n.b, p);
    case GuardKind::Or:
      return guard_eval(*n.a, p) || guard_eval(*n.b, p);
    case GuardKind::Cmp: {
      double l = n.lhs.eval(p);
      double r = n.rhs.eval(p);
      switch (n.op) {
        case CmpOp::Lt: return l < r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Ge: return l >= r;
      }
      return false;
    }
  }
  return false;
}

[[noreturn]] void guard_violation(const Vec3& p, const std::string& guard_source) {
  std::ostringstream os;
  os << "guard violation: point (" << format_double(p.x) << ", " << format_double(p.y)
     << ", " << format_double(p.z) << ") excluded by guard \"" << guard_source << "\"";
  throw Error(Error::Code::Guard, os.str());
}

}  // namespace
}  // namespace detail

Guard::Guard() = default;

Guard Guard::parse(std::string_view source) {
  Guard g;
  g.source_ = std::string(source);
  // trim
  auto text = g.source_;
  std::size_t b = text.find_first_not_of(" \t\r\n");
  std::size_t e = text.find_last_not_of(" \t\r\n");
  std::string trimmed = b == std::string::npos ? "" : text.substr(b, e - b + 1);
  if (trimmed.empty() || trimmed == "none") {
    g.source_ = "none";
    return g;
  }
  detail::GuardParser p(trimmed);
  g.root_ = p.run();
  g.source_ = trimmed;
  return g;
}

bool Guard::admits(const Vec3& p) const {
  if (!root_) return true;
  try {
    return detail::guard_eval(*root_, p);
  } catch (const Error&) {
    return false;  // undefined guard expression: treat as excluded
  }
}

double ScalarField::eval(const Vec3& p) const {
  if (!guard.admits(p)) detail::guard_violation(p, guard.source());
  return expr.eval(p);
}

Vec3 VectorField::eval(const Vec3& p) const {
  if (!guard.admits(p)) detail::guard_violation(p, guard.source());
  return eval_unguarded(p);
}

Vec3 VectorField::eval_unguarded(const Vec3& p) const {
  return {x.eval(p), y.eval(p), z.eval(p)};
}

VectorField gradient(const ScalarField& f) {
  return VectorField(f.expr.diff(Var::X).simplified(), f.expr.diff(Var::Y).simplified(),
                     f.expr.diff(Var::Z).simplified(), f.guard);
}

VectorField curl(const VectorField& w) {
  Expr cx = w.z.diff(Var::Y) - w.y.diff(Var::Z);
  Expr cy = w.x.diff(Var::Z) - w.z.diff(Var::X);
  Expr cz = w.y.diff(Var::X) - w.x.diff(Var::Y);
  return VectorField(cx.simplified(), cy.simplified(), cz.simplified(), w.guard);
}

ScalarField divergence(const VectorField& w) {
  Expr d = w.x.diff(Var::X) + w.y.diff(Var::Y) + w.z.diff(Var::Z);
  return ScalarField(d.simplified(), w.guard);
}

ScalarField laplacian(const ScalarField& f) {
  return divergence(gradient(f));
}

double helicity_density(const VectorField& w, const Vec3& p) {
  if (!w.guard.admits(p)) detail::guard_violation(p, w.guard.source());
  VectorField c = curl(w);
  return dot(w.eval_unguarded(p), c.eval_unguarded(p));
}

Expr magnitude_squared(const VectorField& w) {
  return (pow(w.x, 2) + pow(w.y, 2) + pow(w.z, 2)).simplified();
}

namespace {

Vec3 shifted(const Vec3& p, int axis, double d) {
  Vec3 q = p;
  if (axis == 0) q.x += d;
  else if (axis == 1) q.y += d;
  else q.z += d;
  return q;
}

// d(component c)/d(axis a) by central differences.
double fd_partial(const VectorField& w, const Vec3& p, int c, int a, double h) {
  double plus = w.component(c).eval(shifted(p, a, h));
  double minus = w.component(c).eval(shifted(p, a, -h));
  return (plus - minus) / (2.0 * h);
}

double fd_partial4(const VectorField& w, const Vec3& p, int c, int a, double h) {
  double p2 = w.component(c).eval(shifted(p, a, 2.0 * h));
  double p1 = w.component(c).eval(shifted(p, a, h));
  double m1 = w.component(c).eval(shifted(p, a, -h));
  double m2 = w.component(c).eval(shifted(p, a, -2.0 * h));
  return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

// The stencil reaches `reach` along every axis; all of it must pass.
void require_stencil_in_guard(const VectorField& w, const Vec3& p, double reach) {
  if (w.guard.is_none()) return;
  if (!w.guard.admits(p)) detail::guard_violation(p, w.guard.source());
  for (int a = 0; a < 3; ++a) {
    for (double d : {-reach, -0.5 * reach, 0.5 * reach, reach}) {
      Vec3 q = shifted(p, a, d);
      if (!w.guard.admits(q)) detail::guard_violation(q, w.guard.source());
    }
  }
}

}  // namespace

Vec3 fd_curl(const VectorField& w, const Vec3& p, double h) {
  require_stencil_in_guard(w, p, h);
  return {fd_partial(w, p, 2, 1, h) - fd_partial(w, p, 1, 2, h),
          fd_partial(w, p, 0, 2, h) - fd_partial(w, p, 2, 0, h),
          fd_partial(w, p, 1, 0, h) - fd_partial(w, p, 0, 1, h)};
}

Vec3 fd_curl4(const VectorField& w, const Vec3& p, double h) {
  require_stencil_in_guard(w, p, 2.0 * h);
  return {fd_partial4(w, p, 2, 1, h) - fd_partial4(w, p, 1, 2, h),
          fd_partial4(w, p, 0, 2, h) - fd_partial4(w, p, 2, 0, h),
          fd_partial4(w, p, 1, 0, h) - fd_partial4(w, p, 0, 1, h)};
}

Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h) {
  Vec3 g;
  g.x = (f.expr.eval(shifted(p, 0, h)) - f.expr.eval(shifted(p, 0, -h))) / (2.0 * h);
  g.y = (f.expr.eval(shifted(p, 1, h)) - f.expr.eval(shifted(p, 1, -h))) / (2.0 * h);
  g.z = (f.expr.eval(shifted(p, 2, h)) - f.expr.eval(shifted(p, 2, -h))) / (2.0 * h);
  return g;
}

std::vector<Vec3> sample_box(const Box& box, std::size_t count, std::uint64_t seed,
                             const Guard& guard) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    // 53-bit mantissa draw: deterministic across platforms
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };
  std::vector<Vec3> pts;
  pts.reserve(count);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * (count > 0 ? count : 1);
  while (pts.size() < count && attempts < max_attempts) {
    ++attempts;
    Vec3 p{uniform(box.lo.x, box.hi.x), uniform(box.lo.y, box.hi.y), uniform(box.lo.z, box.hi.z)};
    if (guard.admits(p)) pts.push_back(p);
  }
  if (pts.size() < count)
    throw Error(Error::Code::InvalidArgument,
                "guard \"" + guard.source() + "\" rejected nearly all samples in the box");
  return pts;
}

}  // namespace beltrami
