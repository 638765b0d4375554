#include "beltrami/catalog.hpp"

#include <charconv>
#include <cmath>

namespace beltrami {
namespace {

OrthoTriple make_triple(std::string_view ell, std::string_view psi, std::string_view theta,
                        const Guard& guard) {
  OrthoTriple t;
  t.ell = ScalarField(Expr::parse(ell), guard);
  t.psi = ScalarField(Expr::parse(psi), guard);
  t.theta = ScalarField(Expr::parse(theta), guard);
  return t;
}

/// w = cos(theta) grad psi + sin(theta) grad ell, written out as expressions.
VectorField field_from_triple(const OrthoTriple& t) {
  VectorField gell = gradient(t.ell);
  VectorField gpsi = gradient(t.psi);
  Expr c = cos(t.theta.expr);
  Expr s = sin(t.theta.expr);
  return VectorField((c * gpsi.x + s * gell.x).simplified(), (c * gpsi.y + s * gell.y).simplified(),
                     (c * gpsi.z + s * gell.z).simplified(), t.guard());
}

CatalogEntry from_triple(std::string id, std::string description, OrthoTriple triple,
                         std::string_view hhat, std::string_view div, Box box,
                         std::vector<Vec3> seeds, std::string notes) {
  CatalogEntry e;
  e.id = std::move(id);
  e.description = std::move(description);
  e.field = field_from_triple(triple);
  e.expected_hhat = ScalarField(Expr::parse(hhat), triple.guard());
  e.expected_div = ScalarField(Expr::parse(div), triple.guard());
  e.theta_invariant = triple.theta.expr;
  e.L_invariant = triple.L_theta_expr();
  e.sample_box = box;
  e.flow_seeds = std::move(seeds);
  e.notes = std::move(notes);
  e.triple = std::move(triple);
  return e;
}

CatalogEntry make_abc(double A, double B, double C) {
  CatalogEntry e;
  std::string id = "abc(" + format_double(A) + "," + format_double(B) + "," + format_double(C) + ")";
  e.id = id;
  e.description = "Arnold-Beltrami-Childress flow, a strong Beltrami field with unit factor";
  Expr a = Expr::constant(A), b = Expr::constant(B), c = Expr::constant(C);
  Expr X = Expr::variable(Var::X), Y = Expr::variable(Var::Y), Z = Expr::variable(Var::Z);
  e.field = VectorField((a * sin(Z) + c * cos(Y)).simplified(), (b * sin(X) + a * cos(Z)).simplified(),
                        (c * sin(Y) + b * cos(X)).simplified(), Guard::none());
  e.expected_hhat = ScalarField(Expr::constant(1.0));
  e.expected_div = ScalarField(Expr::constant(0.0));
  e.sample_box = Box{{-3, -3, -3}, {3, 3, 3}};
  e.flow_seeds = {{0.5, 0.3, 0.1}, {1.0, -0.7, 0.4}, {-0.2, 0.8, 1.1}, {2.0, 0.1, -0.5}, {-1.3, -0.4, 0.7}};
  e.notes = "no coordinate triple: the flow is generically chaotic and carries no invariant pair";
  return e;
}

bool parse_abc_params(std::string_view id, double out[3]) {
  if (!id.starts_with("abc(") || !id.ends_with(")")) return false;
  std::string_view body = id.substr(4, id.size() - 5);
  for (int i = 0; i < 3; ++i) {
    std::size_t comma = body.find(',');
    std::string_view tok = i < 2 ? body.substr(0, comma) : body;
    if (i < 2 && comma == std::string_view::npos) return false;
    try {
      out[i] = std::stod(std::string(tok));
    } catch (const std::exception&) {
      return false;
    }
    if (i < 2) body.remove_prefix(comma + 1);
  }
  return true;
}

const char* kCylGuard = "x^2 + y^2 >= 0.0025 and (x > 0.05 or y^2 > 0.0025)";

}  // namespace

CatalogEntry get_example(std::string_view id) {
  if (id == "b0") {
    return from_triple(
        "b0", "sin z grad x + cos z grad y, the simplest nontrivial Beltrami field",
        make_triple("x", "y", "z", Guard::none()), "1", "0", Box{{-2, -2, -2}, {2, 2, 2}},
        {{1, 0, 0}, {0.5, -0.5, 0.7}, {-1, 0.3, 1.2}, {0.2, 1.1, -0.8}, {-0.4, -1.0, 0.4}},
        "unit-strength field; streamlines are straight lines in z = const planes");
  }
  if (id == "ex1") {
    return from_triple(
        "ex1", "cos z grad log r + sin z grad azimuth (cylindrical chart)",
        make_triple("atan2(y, x)", "log(x^2 + y^2)/2", "z", Guard::parse(kCylGuard)), "-1", "0",
        Box{{-2, -2, -2}, {2, 2, 2}},
        {{1.2, 0.3, 0.4}, {1.0, 0.5, -0.3}, {0.8, 0.9, 0.2}, {1.5, -0.4, 0.5}, {1.1, -0.6, -0.2}},
        "guard keeps r >= 0.05 and stays off the atan2 branch cut; streamlines spiral and may "
        "exit the chart, truncating the trace");
  }
  if (id == "ex2") {
    return from_triple(
        "ex2", "sin azimuth grad z + cos azimuth grad r (cylindrical chart, non-solenoidal)",
        make_triple("z", "sqrt(x^2 + y^2)", "atan2(y, x)", Guard::parse(kCylGuard)),
        "(x^2 + y^2)^(-1/2)", "cos(atan2(y, x))/sqrt(x^2 + y^2)", Box{{-2, -2, -2}, {2, 2, 2}},
        {{1.0, 0.2, 0.0}, {1.3, 0.4, 0.5}, {0.9, 0.1, -0.7}, {1.6, 0.5, 0.3}, {1.1, 0.3, 0.9}},
        "divergence cos(theta)/r is nonzero: mass is not conserved for an ideal gas");
  }
  if (id == "ex3") {
    return from_triple(
        "ex3", "cos z grad v + sin z grad u (parabolic cylindrical chart)",
        make_triple("sqrt(sqrt(x^2 + y^2) + x)", "sqrt(sqrt(x^2 + y^2) - x)", "z",
                    Guard::parse("y >= 0.05")),
        "1", "0", Box{{-2, -2, -2}, {2, 2, 2}},
        {{0.8, 1.0, 0.3}, {-0.5, 1.2, 0.6}, {0.3, 0.9, -0.4}, {1.0, 1.4, 0.1}, {-0.9, 0.8, -0.6}},
        "the extracted factor is sign(y): the stated +1 holds on the y > 0 sheet, where the "
        "guard confines sampling (u, v degenerate across y = 0)");
  }
  if (id == "ex4") {
    return from_triple(
        "ex4", "cos azimuth grad eta + sin azimuth grad xi (parabolic chart, non-solenoidal)",
        make_triple("sqrt(sqrt(x^2 + y^2 + z^2) + z)", "sqrt(sqrt(x^2 + y^2 + z^2) - z)",
                    "atan2(y, x)",
                    Guard::parse("x^2 + y^2 + z^2 >= 0.0025 and x^2 + y^2 >= 0.0025 and "
                                 "sqrt(x^2 + y^2 + z^2) + z >= 0.0025 and "
                                 "sqrt(x^2 + y^2 + z^2) - z >= 0.0025 and "
                                 "(x > 0.05 or y^2 > 0.0025)")),
        "(x^2 + y^2)^(-1/2)",
        "(x/sqrt(sqrt(x^2 + y^2 + z^2) - z) + y/sqrt(sqrt(x^2 + y^2 + z^2) + z))"
        "/(2*sqrt(x^2 + y^2)*sqrt(x^2 + y^2 + z^2))",
        Box{{-2, -2, -2}, {2, 2, 2}},
        {{1.0, 0.3, 0.2}, {1.2, 0.5, -0.4}, {0.9, 0.2, 0.6}, {1.4, 0.6, 0.1}, {1.1, 0.4, -0.7}},
        "factor 1/r uses the cylindrical radius r = sqrt(x^2 + y^2)");
  }
  if (id == "ex5") {
    return from_triple(
        "ex5", "constructed factor exp(x + y): theta solves |grad theta| = exp(x + y)",
        make_triple("z", "(x - y)/sqrt(2)", "exp(x + y)/sqrt(2)", Guard::none()), "exp(x + y)",
        "0", Box{{-1, -1, -1}, {1, 1, 1}},
        {{0.2, -0.3, 0.1}, {0.5, 0.4, -0.2}, {-0.6, 0.3, 0.5}, {0.1, 0.1, 0.8}, {-0.3, -0.5, -0.4}},
        "x + y is constant along each streamline, so trajectories are straight lines");
  }
  if (id == "ex6") {
    return from_triple(
        "ex6", "constructed factor -cos(x - y): theta = sin(x - y)/sqrt(2)",
        make_triple("(z - x - y)/sqrt(3)", "(x + y + 2*z)/sqrt(6)", "sin(x - y)/sqrt(2)",
                    Guard::parse("cos(x - y) >= 0.05")),
        "-cos(x - y)", "0", Box{{-1, -1, -1}, {1, 1, 1}},
        {{0.3, 0.1, 0.2}, {-0.2, 0.4, -0.3}, {0.5, 0.2, 0.6}, {0.0, -0.4, 0.1}, {-0.5, -0.2, -0.6}},
        "guard keeps cos(x - y) away from 0, where the factor changes sign and the alignment "
        "residual loses its normalisation");
  }
  if (id == "ex7") {
    return from_triple(
        "ex7", "constructed factor atan(x + y + z)",
        make_triple("(x - y)/sqrt(2)", "(x + y - 2*z)/sqrt(6)",
                    "((x + y + z)*atan(x + y + z) - log(1 + (x + y + z)^2)/2)/sqrt(3)",
                    Guard::parse("x + y + z >= 0.05")),
        "atan(x + y + z)", "0", Box{{-1, -1, -1}, {1, 1, 1}},
        {{0.3, 0.2, 0.1}, {0.5, -0.2, 0.4}, {0.1, 0.4, 0.3}, {0.6, 0.3, -0.4}, {-0.2, 0.5, 0.8}},
        "guard keeps x + y + z >= 0.05: the factor vanishes on the plane x + y + z = 0");
  }
  if (id == "ex8") {
    return from_triple(
        "ex8", "harmonic-conjugate pair: ell = e^x sin y, psi = -e^x cos y, theta = z",
        make_triple("exp(x)*sin(y)", "-(exp(x)*cos(y))", "z", Guard::none()), "1", "0",
        Box{{-1, -1, -1}, {1, 1, 1}},
        {{-2.5, 0.1, 0.05}, {-2.2, -0.3, 0.2}, {-2.8, 0.25, -0.15}, {-2.4, -0.1, -0.3}, {-2.6, 0.3, 0.1}},
        "flow seeds sit in the slow small-|L_theta| region (x <= -2): generic streamlines of "
        "this field escape to x = +infinity in finite time");
  }
  if (id == "abc") return make_abc(1.0, 1.0, 1.0);
  double p[3];
  if (parse_abc_params(id, p)) return make_abc(p[0], p[1], p[2]);
  throw Error(Error::Code::UnknownId,
              "unknown catalog id '" + std::string(id) +
                  "' (expected b0, ex1..ex8, abc or abc(A,B,C))");
}

std::vector<std::string> catalog_ids() {
  return {"b0", "ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8", "abc"};
}

}  // namespace beltrami
