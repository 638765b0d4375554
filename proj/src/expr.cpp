#include "beltrami/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

namespace beltrami {
namespace detail {

enum class Kind { Constant, Variable, Unary, Binary, Power, External };
enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt, Atan };
enum class BinaryOp { Add, Sub, Mul, Div, Atan2 };

struct ExternalFn {
  std::string name;
  std::function<double(const Vec3&)> eval;
  std::array<Expr, 3> gradient;
};

struct Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  Var var = Var::X;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  NodePtr a;
  NodePtr b;
  long long pnum = 1;  // power exponent, reduced, pden > 0
  long long pden = 1;
  std::shared_ptr<const ExternalFn> ext;
};

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  return n;
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_power(NodePtr base, long long num, long long den) {
  if (den == 0) throw Error(Error::Code::InvalidArgument, "power exponent with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->a = std::move(base);
  n->pnum = num;
  n->pden = den;
  return n;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Atan: return "atan";
  }
  return "?";
}

[[noreturn]] void domain_error(const std::string& what, const Vec3& p) {
  std::ostringstream os;
  os << "domain error: " << what << " at (" << format_double(p.x) << ", "
     << format_double(p.y) << ", " << format_double(p.z) << ")";
  throw Error(Error::Code::Domain, os.str());
}

double ipow(double base, long long e, const Vec3& p) {
  if (e < 0) {
    if (base == 0.0) domain_error("x^negative with x = 0", p);
    return 1.0 / ipow(base, -e, p);
  }
  double result = 1.0;
  double acc = base;
  while (e > 0) {
    if (e & 1) result *= acc;
    acc *= acc;
    e >>= 1;
  }
  return result;
}

double eval_node(const Node& n, const Vec3& p);

double eval_power(const Node& n, const Vec3& p) {
  double base = eval_node(*n.a, p);
  if (n.pden == 1) return ipow(base, n.pnum, p);
  if (base < 0.0) domain_error("fractional power of negative base", p);
  if (base == 0.0) {
    if (n.pnum < 0) domain_error("x^negative with x = 0", p);
    return 0.0;
  }
  if (n.pden == 2) {
    double r = std::sqrt(base);
    return ipow(r, n.pnum, p);
  }
  return std::pow(base, static_cast<double>(n.pnum) / static_cast<double>(n.pden));
}

double eval_node(const Node& n, const Vec3& p) {
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Variable:
      return p[static_cast<int>(n.var)];
    case Kind::Unary: {
      double a = eval_node(*n.a, p);
      switch (n.uop) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Exp: return std::exp(a);
        case UnaryOp::Log:
          if (a <= 0.0) domain_error("log of non-positive argument", p);
          return std::log(a);
        case UnaryOp::Sqrt:
          if (a < 0.0) domain_error("sqrt of negative argument", p);
          return std::sqrt(a);
        case UnaryOp::Atan: return std::atan(a);
      }
      return 0.0;
    }
    case Kind::Binary: {
      double a = eval_node(*n.a, p);
      double b = eval_node(*n.b, p);
      switch (n.bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == 0.0) domain_error("division by zero", p);
          return a / b;
        case BinaryOp::Atan2:
          if (a == 0.0 && b == 0.0) domain_error("atan2(0, 0)", p);
          return std::atan2(a, b);
      }
      return 0.0;
    }
    case Kind::Power:
      return eval_power(n, p);
    case Kind::External:
      return n.ext->eval(p);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Smart constructors used by diff: fold trivial identities so derivative
// trees stay readable. All folds are pointwise value-preserving.

bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

NodePtr s_add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Constant && b->kind == Kind::Constant)
    return make_constant(a->value + b->value);
  return make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

NodePtr s_neg(NodePtr a) {
  if (a->kind == Kind::Constant) return make_constant(-a->value);
  if (a->kind == Kind::Unary && a->uop == UnaryOp::Neg) return a->a;
  return make_unary(UnaryOp::Neg, std::move(a));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return s_neg(std::move(b));
  if (a->kind == Kind::Constant && b->kind == Kind::Constant)
    return make_constant(a->value - b->value);
  return make_binary(BinaryOp::Sub, std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return s_neg(std::move(b));
  if (is_const(b, -1.0)) return s_neg(std::move(a));
  if (a->kind == Kind::Constant && b->kind == Kind::Constant)
    return make_constant(a->value * b->value);
  return make_binary(BinaryOp::Mul, std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_constant(0.0);
  if (is_const(b, 1.0)) return a;
  return make_binary(BinaryOp::Div, std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr base, long long num, long long den) {
  auto n = make_power(std::move(base), num, den);
  if (n->pnum == n->pden) return n->a;
  if (n->pnum == 0) return make_constant(1.0);
  return n;
}

// ---------------------------------------------------------------------------

NodePtr diff_node(const NodePtr& n, Var v);

NodePtr diff_unary(const NodePtr& n, Var v) {
  NodePtr du = diff_node(n->a, v);
  switch (n->uop) {
    case UnaryOp::Neg:
      return s_neg(std::move(du));
    case UnaryOp::Sin:
      return s_mul(make_unary(UnaryOp::Cos, n->a), std::move(du));
    case UnaryOp::Cos:
      return s_neg(s_mul(make_unary(UnaryOp::Sin, n->a), std::move(du)));
    case UnaryOp::Exp:
      return s_mul(n, std::move(du));
    case UnaryOp::Log:
      return s_div(std::move(du), n->a);
    case UnaryOp::Sqrt:
      return s_div(std::move(du), s_mul(make_constant(2.0), n));
    case UnaryOp::Atan:
      return s_div(std::move(du),
                   s_add(make_constant(1.0), s_pow(n->a, 2, 1)));
  }
  return make_constant(0.0);
}

NodePtr diff_node(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Kind::Constant:
      return make_constant(0.0);
    case Kind::Variable:
      return make_constant(n->var == v ? 1.0 : 0.0);
    case Kind::Unary:
      return diff_unary(n, v);
    case Kind::Binary: {
      switch (n->bop) {
        case BinaryOp::Add:
          return s_add(diff_node(n->a, v), diff_node(n->b, v));
        case BinaryOp::Sub:
          return s_sub(diff_node(n->a, v), diff_node(n->b, v));
        case BinaryOp::Mul:
          return s_add(s_mul(diff_node(n->a, v), n->b),
                       s_mul(n->a, diff_node(n->b, v)));
        case BinaryOp::Div:
          return s_div(s_sub(s_mul(diff_node(n->a, v), n->b),
                             s_mul(n->a, diff_node(n->b, v))),
                       s_pow(n->b, 2, 1));
        case BinaryOp::Atan2: {
          // d atan2(u, w) = (w du - u dw) / (u^2 + w^2)
          NodePtr du = diff_node(n->a, v);
          NodePtr dw = diff_node(n->b, v);
          return s_div(s_sub(s_mul(n->b, std::move(du)), s_mul(n->a, std::move(dw))),
                       s_add(s_pow(n->a, 2, 1), s_pow(n->b, 2, 1)));
        }
      }
      return make_constant(0.0);
    }
    case Kind::Power: {
      // d u^(p/q) = (p/q) u^((p-q)/q) du
      NodePtr du = diff_node(n->a, v);
      double coeff = static_cast<double>(n->pnum) / static_cast<double>(n->pden);
      return s_mul(s_mul(make_constant(coeff), s_pow(n->a, n->pnum - n->pden, n->pden)),
                   std::move(du));
    }
    case Kind::External:
      return n->ext->gradient[static_cast<int>(v)].node();
  }
  return make_constant(0.0);
}

// ---------------------------------------------------------------------------

NodePtr simplify_node(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Variable:
    case Kind::External:
      return n;
    case Kind::Unary: {
      NodePtr a = simplify_node(n->a);
      if (a->kind == Kind::Constant) {
        Node probe = *n;
        probe.a = a;
        // Fold only when defined and finite at the (point-free) constant.
        try {
          double v = eval_node(probe, Vec3{});
          if (std::isfinite(v)) return make_constant(v);
        } catch (const Error&) {
        }
      }
      if (n->uop == UnaryOp::Neg) return s_neg(std::move(a));
      return a == n->a ? n : make_unary(n->uop, std::move(a));
    }
    case Kind::Binary: {
      NodePtr a = simplify_node(n->a);
      NodePtr b = simplify_node(n->b);
      switch (n->bop) {
        case BinaryOp::Add: return s_add(std::move(a), std::move(b));
        case BinaryOp::Sub: return s_sub(std::move(a), std::move(b));
        case BinaryOp::Mul: return s_mul(std::move(a), std::move(b));
        case BinaryOp::Div: {
          if (a->kind == Kind::Constant && b->kind == Kind::Constant && b->value != 0.0)
            return make_constant(a->value / b->value);
          return s_div(std::move(a), std::move(b));
        }
        case BinaryOp::Atan2: {
          if (a->kind == Kind::Constant && b->kind == Kind::Constant &&
              !(a->value == 0.0 && b->value == 0.0))
            return make_constant(std::atan2(a->value, b->value));
          return (a == n->a && b == n->b) ? n : make_binary(BinaryOp::Atan2, std::move(a), std::move(b));
        }
      }
      return n;
    }
    case Kind::Power: {
      NodePtr a = simplify_node(n->a);
      if (a->kind == Kind::Constant) {
        Node probe = *n;
        probe.a = a;
        try {
          double v = eval_node(probe, Vec3{});
          if (std::isfinite(v)) return make_constant(v);
        } catch (const Error&) {
        }
      }
      return s_pow(std::move(a), n->pnum, n->pden);
    }
  }
  return n;
}

NodePtr substitute_node(const NodePtr& n, Var v, const NodePtr& replacement) {
  switch (n->kind) {
    case Kind::Constant:
      return n;
    case Kind::Variable:
      return n->var == v ? replacement : n;
    case Kind::Unary: {
      NodePtr a = substitute_node(n->a, v, replacement);
      return a == n->a ? n : make_unary(n->uop, std::move(a));
    }
    case Kind::Binary: {
      NodePtr a = substitute_node(n->a, v, replacement);
      NodePtr b = substitute_node(n->b, v, replacement);
      return (a == n->a && b == n->b) ? n : make_binary(n->bop, std::move(a), std::move(b));
    }
    case Kind::Power: {
      NodePtr a = substitute_node(n->a, v, replacement);
      return a == n->a ? n : make_power(std::move(a), n->pnum, n->pden);
    }
    case Kind::External:
      throw Error(Error::Code::InvalidArgument,
                  "cannot substitute inside opaque numeric expression '" + n->ext->name + "'");
  }
  return n;
}

bool same_node(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Constant:
      return a->value == b->value;
    case Kind::Variable:
      return a->var == b->var;
    case Kind::Unary:
      return a->uop == b->uop && same_node(a->a, b->a);
    case Kind::Binary:
      return a->bop == b->bop && same_node(a->a, b->a) && same_node(a->b, b->b);
    case Kind::Power:
      return a->pnum == b->pnum && a->pden == b->pden && same_node(a->a, b->a);
    case Kind::External:
      return a->ext == b->ext;
  }
  return false;
}

bool depends_node(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Kind::Constant:
      return false;
    case Kind::Variable:
      return n->var == v;
    case Kind::Unary:
      return depends_node(n->a, v);
    case Kind::Binary:
      return depends_node(n->a, v) || depends_node(n->b, v);
    case Kind::Power:
      return depends_node(n->a, v);
    case Kind::External:
      return true;  // opaque: assume full dependence
  }
  return false;
}

bool has_external_node(const NodePtr& n) {
  switch (n->kind) {
    case Kind::External:
      return true;
    case Kind::Unary:
    case Kind::Power:
      return has_external_node(n->a);
    case Kind::Binary:
      return has_external_node(n->a) || has_external_node(n->b);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Printer. Precedence: add/sub = 1, mul/div = 2, power = 3, atoms = 4.
// Unary minus prints at power precedence ('-x^2' parses as (-x)^2, so a
// negated base never needs parentheses of its own).

int precedence(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Binary:
      switch (n->bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Atan2: return 4;
      }
      return 4;
    case Kind::Power:
      return 3;
    case Kind::Unary:
      return n->uop == UnaryOp::Neg ? 3 : 4;
    default:
      return 4;
  }
}

void print_node(const NodePtr& n, std::string& out, int parent_prec, bool right_child) {
  int prec = precedence(n);
  bool parens = prec < parent_prec || (right_child && prec == parent_prec);
  if (parens) out += '(';
  switch (n->kind) {
    case Kind::Constant:
      out += format_double(n->value);
      break;
    case Kind::Variable:
      out += (n->var == Var::X ? 'x' : (n->var == Var::Y ? 'y' : 'z'));
      break;
    case Kind::Unary:
      if (n->uop == UnaryOp::Neg) {
        out += '-';
        // The grammar binds '-' tighter than '^': print the operand at
        // power precedence so "-x^2" round-trips as Neg(x)^2 would.
        print_node(n->a, out, 4, false);
      } else {
        out += unary_name(n->uop);
        out += '(';
        print_node(n->a, out, 0, false);
        out += ')';
      }
      break;
    case Kind::Binary:
      if (n->bop == BinaryOp::Atan2) {
        out += "atan2(";
        print_node(n->a, out, 0, false);
        out += ", ";
        print_node(n->b, out, 0, false);
        out += ')';
      } else {
        const char* op = n->bop == BinaryOp::Add ? " + "
                         : n->bop == BinaryOp::Sub ? " - "
                         : n->bop == BinaryOp::Mul ? "*"
                                                   : "/";
        print_node(n->a, out, prec, false);
        out += op;
        // The grammar is left-associative: a right child at equal
        // precedence needs parentheses to keep the tree shape.
        print_node(n->b, out, prec, true);
      }
      break;
    case Kind::Power:
      print_node(n->a, out, prec + 1, false);
      out += '^';
      if (n->pden == 1 && n->pnum >= 0) {
        out += std::to_string(n->pnum);
      } else {
        out += '(';
        out += std::to_string(n->pnum);
        if (n->pden != 1) {
          out += '/';
          out += std::to_string(n->pden);
        }
        out += ')';
      }
      break;
    case Kind::External:
      out += '<';
      out += n->ext->name;
      out += '>';
      break;
  }
  if (parens) out += ')';
}

// ---------------------------------------------------------------------------
// Recursive descent parser for:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' int_or_rational)?
//   base   := number | var | func '(' expr (',' expr)? ')' | '(' expr ')' | '-' base
// Whitespace insensitive; implicit multiplication rejected.

class Parser {
 public:
  Parser(std::string_view src, const std::array<std::string, 3>& vars)
      : src_(src), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input (missing operator?)", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = make_binary(BinaryOp::Add, std::move(e), parse_term());
      else if (eat('-'))
        e = make_binary(BinaryOp::Sub, std::move(e), parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    for (;;) {
      if (eat('*'))
        e = make_binary(BinaryOp::Mul, std::move(e), parse_factor());
      else if (eat('/'))
        e = make_binary(BinaryOp::Div, std::move(e), parse_factor());
      else
        return e;
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (eat('^')) {
      auto [num, den] = parse_exponent();
      return make_power(std::move(base), num, den);
    }
    return base;
  }

  std::pair<long long, long long> parse_exponent() {
    skip_ws();
    bool parens = eat('(');
    skip_ws();
    bool negative = eat('-');
    long long num = parse_integer("exponent");
    long long den = 1;
    // a rational exponent must be parenthesised: x^2/2 is (x^2)/2
    if (parens && eat('/')) den = parse_integer("exponent denominator");
    if (parens && !eat(')'))
      throw ParseError("expected ')' after exponent", pos_);
    return {negative ? -num : num, den};
  }

  long long parse_integer(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == start)
      throw ParseError(std::string("expected integer ") + what, pos_);
    long long v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc())
      throw ParseError(std::string("integer ") + what + " out of range", start);
    return v;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      NodePtr inner = parse_base();
      // Fold a negated literal into the constant so print/parse round-trips.
      if (inner->kind == Kind::Constant) return make_constant(-inner->value);
      return make_unary(UnaryOp::Neg, std::move(inner));
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else; not a valid exponent
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'",
                       start);
    return make_constant(v);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    for (int i = 0; i < 3; ++i) {
      if (name == vars_[i]) return make_variable(static_cast<Var>(i));
    }
    static const std::pair<const char*, UnaryOp> funcs[] = {
        {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos},   {"exp", UnaryOp::Exp},
        {"log", UnaryOp::Log}, {"sqrt", UnaryOp::Sqrt}, {"atan", UnaryOp::Atan}};
    if (name == "atan2") {
      if (!eat('(')) throw ParseError("expected '(' after atan2", pos_);
      NodePtr a = parse_expr();
      if (!eat(',')) throw ParseError("atan2 takes two arguments", pos_);
      NodePtr b = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return make_binary(BinaryOp::Atan2, std::move(a), std::move(b));
    }
    for (const auto& [fname, op] : funcs) {
      if (name == fname) {
        if (!eat('(')) throw ParseError("expected '(' after " + name, pos_);
        NodePtr a = parse_expr();
        if (eat(',')) throw ParseError(name + " takes one argument", pos_);
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return make_unary(op, std::move(a));
      }
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  std::array<std::string, 3> vars_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------

using detail::Node;
using detail::NodePtr;

Expr::Expr() : node_(detail::make_constant(0.0)) {}

Expr Expr::constant(double value) { return Expr(detail::make_constant(value)); }

Expr Expr::variable(Var v) { return Expr(detail::make_variable(v)); }

Expr Expr::parse(std::string_view source) {
  detail::Parser p(source, {"x", "y", "z"});
  return Expr(p.run());
}

Expr Expr::parse_profile(std::string_view source, std::string_view var_name) {
  // The profile variable maps onto Var::X; the other slots get names that
  // cannot appear as identifiers, so stray x/y/z are rejected.
  detail::Parser p(source, {std::string(var_name), "\x01", "\x02"});
  return Expr(p.run());
}

Expr Expr::external(std::string name, std::function<double(const Vec3&)> eval,
                    std::array<Expr, 3> gradient) {
  auto ext = std::make_shared<detail::ExternalFn>();
  ext->name = std::move(name);
  ext->eval = std::move(eval);
  ext->gradient = std::move(gradient);
  auto n = std::make_shared<Node>();
  n->kind = detail::Kind::External;
  n->ext = std::move(ext);
  return Expr(n);
}

double Expr::eval(const Vec3& p) const { return detail::eval_node(*node_, p); }

Expr Expr::diff(Var v) const { return Expr(detail::diff_node(node_, v)); }

Expr Expr::simplified() const { return Expr(detail::simplify_node(node_)); }

Expr Expr::substituted(Var v, const Expr& replacement) const {
  return Expr(detail::substitute_node(node_, v, replacement.node_));
}

std::string Expr::str() const {
  std::string out;
  detail::print_node(node_, out, 0, false);
  return out;
}

bool Expr::same_structure(const Expr& other) const {
  return detail::same_node(node_, other.node_);
}

bool Expr::is_constant(double* value) const {
  if (node_->kind != detail::Kind::Constant) return false;
  if (value) *value = node_->value;
  return true;
}

bool Expr::depends_on(Var v) const { return detail::depends_node(node_, v); }

bool Expr::has_external() const { return detail::has_external_node(node_); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::s_add(a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::s_sub(a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::s_mul(a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::s_div(a.node_, b.node_));
}
Expr operator-(const Expr& a) { return Expr(detail::s_neg(a.node_)); }

Expr sin(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Exp, a.node_)); }
Expr log(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Log, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Sqrt, a.node_)); }
Expr atan(const Expr& a) { return Expr(detail::make_unary(detail::UnaryOp::Atan, a.node_)); }
Expr atan2(const Expr& y, const Expr& x) {
  return Expr(detail::make_binary(detail::BinaryOp::Atan2, y.node_, x.node_));
}
Expr pow(const Expr& base, long long num, long long den) {
  return Expr(detail::s_pow(base.node_, num, den));
}

std::string format_double(double v) {
  // locale-independent %.17g
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace beltrami
