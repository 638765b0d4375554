#include <doctest.h>

#include <cmath>

#include "beltrami/catalog.hpp"
#include "beltrami/frames.hpp"
#include "test_util.hpp"

using namespace beltrami;
using testutil::close;
using testutil::close_rel;

namespace {

OrthoTriple triple_of(const char* ell, const char* psi, const char* theta,
                      Guard guard = Guard::none()) {
  OrthoTriple t;
  t.ell = ScalarField(Expr::parse(ell), guard);
  t.psi = ScalarField(Expr::parse(psi), guard);
  t.theta = ScalarField(Expr::parse(theta), guard);
  return t;
}

std::vector<Vec3> box_points(std::size_t n, std::uint64_t seed, const Guard& g = Guard::none(),
                             Box box = Box{{-1, -1, -1}, {1, 1, 1}}) {
  return sample_box(box, n, seed, g);
}

// ||curl w - factor * w|| / ||w|| over the points, by exact differentiation
double factor_residual(const VectorField& w, const ScalarField& factor, double sign,
                       std::span<const Vec3> pts) {
  VectorField c = curl(w);
  double worst = 0.0;
  for (const Vec3& p : pts) {
    Vec3 wv = w.eval_unguarded(p);
    Vec3 cv = c.eval_unguarded(p);
    Vec3 diff = cv - sign * factor.expr.eval(p) * wv;
    worst = std::max(worst, norm(diff) / (norm(wv) + 1e-300));
  }
  return worst;
}

}  // namespace

TEST_SUITE_BEGIN("frames");

TEST_CASE("construction conditions hold for the constructed example") {
  CatalogEntry ex5 = get_example("ex5");
  auto pts = box_points(200, 101);
  ConditionReport rep =
      check_construction_conditions(*ex5.triple, ScalarField("exp(x + y)"), pts, 1e-9);
  CHECK(rep.all_pass());
  for (const auto& c : rep.conditions) CHECK(c.max_residual <= 1e-12);
}

TEST_CASE("construction conditions for the Cartesian triple") {
  auto pts = box_points(100, 103);
  ConditionReport rep = check_construction_conditions(triple_of("x", "y", "z"),
                                                      ScalarField(Expr::constant(1.0)), pts);
  CHECK(rep.all_pass());
  for (const auto& c : rep.conditions) CHECK(c.max_residual == 0.0);
}

TEST_CASE("unequal scale factors are caught with the exact residual") {
  auto pts = box_points(100, 107);
  ConditionReport rep = check_construction_conditions(triple_of("x", "2*y", "z"),
                                                      ScalarField(Expr::constant(1.0)), pts);
  CHECK(!rep.all_pass());
  const ConditionCheck* c = rep.find("| |grad ell| - |grad psi| |");
  REQUIRE(c != nullptr);
  CHECK(!c->pass);
  CHECK(c->max_residual == doctest::Approx(1.0).epsilon(1e-15));
  // orthogonality and the eikonal condition still hold
  CHECK(rep.find("|grad ell . grad psi|")->pass);
  CHECK(rep.find("| |grad theta| - |alpha| |")->pass);
}

TEST_CASE("representation conditions pass where construction conditions pass") {
  CatalogEntry ex5 = get_example("ex5");
  auto pts = box_points(200, 109);
  ConditionReport rep = check_representation_conditions(*ex5.triple, pts, 1e-9);
  CHECK(rep.all_pass());

  CatalogEntry ex8 = get_example("ex8");
  ConditionReport rep8 = check_representation_conditions(*ex8.triple, pts, 1e-9);
  CHECK(rep8.all_pass());
  for (const auto& c : rep8.conditions) CHECK(c.max_residual <= 1e-12);
}

TEST_CASE("the quadratic representation condition fails for unequal scale factors") {
  // at z = pi/4: cos sin (|grad psi|^2 - |grad ell|^2) = 3/2, rhs = 0
  std::vector<Vec3> pts = {{0.3, 0.4, M_PI / 4}};
  ConditionReport rep = check_representation_conditions(triple_of("x", "2*y", "z"), pts, 1e-9);
  CHECK(!rep.all_pass());
  CHECK(rep.conditions[0].max_residual == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("build_beltrami: eigenpair for every catalog triple") {
  for (const auto& id : catalog_ids()) {
    CatalogEntry e = get_example(id);
    if (!e.triple) continue;
    auto pts = sample_box(e.sample_box, 60, 113, e.triple->guard());
    ConstructedPair pair = build_beltrami(*e.triple, pts);
    CAPTURE(id);
    CHECK(factor_residual(pair.w, pair.expected_factor, 1.0, pts) <= 1e-10);
    CHECK(factor_residual(pair.w_star, pair.expected_factor, -1.0, pts) <= 1e-10);
    // the construction reproduces the catalog field
    for (const Vec3& p : pts)
      CHECK(norm_inf(pair.w.eval_unguarded(p) - e.field.eval_unguarded(p)) <= 1e-14);
  }
}

TEST_CASE("build_beltrami: sign of the Jacobian decides the eigenvalue sign") {
  // (ell, psi, theta) = (y, x, z): h = grad y . grad x x grad z = -1
  OrthoTriple t = triple_of("y", "x", "z");
  auto pts = box_points(20, 127);
  ConstructedPair pair = build_beltrami(t, pts);
  CHECK(pair.sigma == -1);
  // w = cos z grad x + sin z grad y has curl w = -w
  VectorField c = curl(pair.w);
  for (const Vec3& p : pts) {
    CHECK(norm_inf(c.eval_unguarded(p) + pair.w.eval_unguarded(p)) <= 1e-15);
    CHECK(pair.expected_factor.eval(p) == doctest::Approx(-1.0).epsilon(1e-15));
  }
  CHECK(factor_residual(pair.w_star, pair.expected_factor, -1.0, pts) <= 1e-14);
}

TEST_CASE("build_beltrami rejects sign-inconsistent samples") {
  // the parabolic cylindrical chart degenerates across y = 0
  OrthoTriple chart = catalog_chart(ChartName::ParabolicCylindrical);
  auto pts = sample_box(Box{{-2, -2, -1}, {2, 2, 1}}, 40, 131, chart.guard());
  CHECK_THROWS_AS(build_beltrami(chart, pts), Error);
  try {
    build_beltrami(chart, pts);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::SignInconsistent);
  }
}

TEST_CASE("build_beltrami needs at least nine sigma samples") {
  auto pts = box_points(8, 137);
  CHECK_THROWS_AS(build_beltrami(triple_of("x", "y", "z"), pts), Error);
}

TEST_CASE("profile F(s) = s reduces to the plain constructor") {
  CatalogEntry ex5 = get_example("ex5");
  auto pts = box_points(30, 139);
  ConstructedPair plain = build_beltrami(*ex5.triple, pts);
  ConstructedPair prof = build_beltrami_profile(*ex5.triple, Expr::parse_profile("s"), pts);
  for (const Vec3& p : pts) {
    CHECK(norm_inf(plain.w.eval_unguarded(p) - prof.w.eval_unguarded(p)) <= 1e-15);
    CHECK(close_rel(plain.expected_factor.eval(p), prof.expected_factor.eval(p), 1e-14));
  }
}

TEST_CASE("profile F(s) = 2s doubles the factor") {
  OrthoTriple t = triple_of("y", "x", "z");
  auto pts = box_points(30, 149);
  ConstructedPair pair = build_beltrami_profile(t, Expr::parse_profile("2*s"), pts);
  CHECK(pair.sigma == -1);
  CHECK(factor_residual(pair.w, pair.expected_factor, 1.0, pts) <= 1e-12);
  for (const Vec3& p : pts)
    CHECK(pair.expected_factor.eval(p) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("profile F(s) = s^2/2 gives a position-dependent factor") {
  OrthoTriple t = triple_of("y", "x", "z");
  auto pts = box_points(30, 151);
  ConstructedPair pair = build_beltrami_profile(t, Expr::parse_profile("s^2/2"), pts);
  CHECK(factor_residual(pair.w, pair.expected_factor, 1.0, pts) <= 1e-12);
  for (const Vec3& p : pts)
    CHECK(pair.expected_factor.eval(p) == doctest::Approx(-p.z).epsilon(1e-14));
}

TEST_CASE("ratio construction: f = 0 gives a gradient field") {
  auto pts = box_points(30, 157);
  RatioField rf = build_beltrami_ratio(ScalarField("x"), ScalarField("y"), ScalarField("z"),
                                       Expr::parse_profile("0"), pts);
  VectorField c = curl(rf.w);
  for (const Vec3& p : pts) {
    CHECK(norm_inf(rf.w.eval_unguarded(p) - Vec3{0, 1, 0}) <= 1e-15);
    CHECK(norm(c.eval_unguarded(p)) == 0.0);
    CHECK(rf.expected_factor.eval(p) == 0.0);
  }
}

TEST_CASE("ratio construction: f = tan reproduces the plain constructor") {
  Guard g = Guard::parse("z > -1.2 and z < 1.2");
  auto pts = sample_box(Box{{-1, -1, -1}, {1, 1, 1}}, 30, 163, g);
  RatioField rf =
      build_beltrami_ratio(ScalarField(Expr::parse("x"), g), ScalarField(Expr::parse("y"), g),
                           ScalarField(Expr::parse("z"), g),
                           Expr::parse_profile("sin(s)/cos(s)"), pts);
  ConstructedPair plain = build_beltrami(triple_of("x", "y", "z"), pts);
  for (const Vec3& p : pts) {
    CHECK(norm_inf(rf.w.eval_unguarded(p) - plain.w.eval_unguarded(p)) <= 1e-13);
    // arctan(tan z) = z: the factor is sigma |grad z| = 1
    CHECK(close_rel(rf.expected_factor.eval(p), 1.0, 1e-12));
  }
}

TEST_CASE("ratio construction: f = gamma, factor verified against the symbolic curl") {
  auto pts = box_points(30, 167);
  RatioField rf = build_beltrami_ratio(ScalarField("x"), ScalarField("y"), ScalarField("z"),
                                       Expr::parse_profile("s"), pts);
  CHECK(factor_residual(rf.w, rf.expected_factor, 1.0, pts) <= 1e-12);
  for (const Vec3& p : pts)
    CHECK(close_rel(rf.expected_factor.eval(p), 1.0 / (1.0 + p.z * p.z), 1e-13));
}

TEST_CASE("ratio construction rejects non-orthogonal inputs") {
  auto pts = box_points(30, 173);
  CHECK_THROWS_AS(build_beltrami_ratio(ScalarField("x"), ScalarField("x + y"), ScalarField("z"),
                                       Expr::parse_profile("s"), pts),
                  Error);
}

TEST_CASE("planar frame reproduces the constructed-factor examples exactly") {
  // |grad theta| = exp(x+y): n = (1,1,0)/sqrt 2, g(s) = exp(sqrt 2 s)
  PlanarFrame f5 = planar_frame(Vec3{1, 1, 0}, Expr::parse_profile("exp(sqrt(2)*s)"),
                                Expr::parse_profile("exp(sqrt(2)*s)/sqrt(2)"));
  CHECK(!f5.g_sign_change);
  Expr theta5 = Expr::parse("exp(x + y)/sqrt(2)");
  auto pts = box_points(60, 179);
  for (const Vec3& p : pts)
    CHECK(close_rel(f5.triple.theta.expr.eval(p), theta5.eval(p), 1e-12));

  // |grad theta| = |cos(x-y)|: n = (1,-1,0)/sqrt 2, g(s) = cos(sqrt 2 s)
  PlanarFrame f6 = planar_frame(Vec3{1, -1, 0}, Expr::parse_profile("cos(sqrt(2)*s)"),
                                Expr::parse_profile("sin(sqrt(2)*s)/sqrt(2)"), -1.0, 1.0);
  CHECK(!f6.g_sign_change);  // cos(sqrt 2 s) > 0 on [-1, 1]
  Expr theta6 = Expr::parse("sin(x - y)/sqrt(2)");
  for (const Vec3& p : pts)
    CHECK(close(f6.triple.theta.expr.eval(p), theta6.eval(p), 1e-12));
}

TEST_CASE("planar frame reports a zero crossing of g") {
  PlanarFrame f = planar_frame(Vec3{1, -1, 0}, Expr::parse_profile("cos(sqrt(2)*s)"),
                               Expr::parse_profile("sin(sqrt(2)*s)/sqrt(2)"));
  CHECK(f.g_sign_change);  // default interval [-4, 4] crosses cos = 0
}

TEST_CASE("planar frame quadrature path matches the closed form to 1e-8") {
  PlanarFrame quad = planar_frame(Vec3{1, 1, 0}, Expr::parse_profile("exp(sqrt(2)*s)"));
  Expr theta = Expr::parse("exp(x + y)/sqrt(2)");
  // align the additive constant: the quadrature antiderivative vanishes at s = 0
  double offset = theta.eval({0, 0, 0});
  auto pts = box_points(100, 181);
  for (const Vec3& p : pts) {
    CAPTURE(p.x);
    CAPTURE(p.y);
    CHECK(close(quad.triple.theta.expr.eval(p) + offset, theta.eval(p), 1e-8));
  }
}

TEST_CASE("planar frame with g = 1 recovers a unit-factor frame") {
  PlanarFrame f = planar_frame(Vec3{0, 0, 1}, Expr::parse_profile("1"), Expr::parse_profile("s"));
  auto pts = box_points(100, 191);
  ConditionReport rep =
      check_construction_conditions(f.triple, ScalarField(Expr::constant(1.0)), pts, 1e-12);
  CHECK(rep.all_pass());
  ConstructedPair pair = build_beltrami(f.triple, pts);
  CHECK(factor_residual(pair.w, pair.expected_factor, 1.0, pts) <= 1e-12);
  for (const Vec3& p : pts) CHECK(std::abs(pair.expected_factor.eval(p)) == 1.0);
}

TEST_CASE("planar frame output passes the construction conditions with alpha = g(n.x)") {
  struct Case {
    Vec3 n;
    const char* g;
    const char* alpha;  // g(n.x) written in x, y, z
    bool quadrature;
  };
  const Case cases[] = {
      {{1, 1, 0}, "exp(sqrt(2)*s)", "exp(x + y)", false},
      {{1, 1, 0}, "exp(sqrt(2)*s)", "exp(x + y)", true},
      {{1, -1, 0}, "cos(sqrt(2)*s)", "cos(x - y)", true},
      {{1, 1, 1}, "atan(sqrt(3)*s)", "atan(x + y + z)", true},
  };
  auto pts = box_points(150, 193, Guard::parse("x + y + z > 0.05"));
  for (const Case& c : cases) {
    std::optional<Expr> G;
    if (!c.quadrature) {
      // closed antiderivatives for the two smooth profiles above
      G = Expr::parse_profile("exp(sqrt(2)*s)/sqrt(2)");
    }
    PlanarFrame f = planar_frame(c.n, Expr::parse_profile(c.g), G);
    ConditionReport rep =
        check_construction_conditions(f.triple, ScalarField(c.alpha), pts, 1e-12);
    CAPTURE(c.g);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("harmonic conjugate of e^x sin y") {
  ScalarField ell("exp(x)*sin(y)");
  ScalarField psi = harmonic_conjugate(ell, Vec3{0, 0, 0});
  // psi = -e^x cos y + 1 (anchored to zero at the origin)
  for (double x : {-1.0, -0.4, 0.0, 0.5, 1.0}) {
    for (double y : {-1.0, -0.3, 0.2, 0.8}) {
      Vec3 p{x, y, 0};
      double expected = -std::exp(x) * std::cos(y) + 1.0;
      CHECK(close(psi.eval(p), expected, 1e-8));
    }
  }
  // exact gradient: psi_x = -ell_y = -e^x cos y, psi_y = ell_x = e^x sin y
  VectorField g = gradient(psi);
  Vec3 p{0.3, -0.6, 0};
  CHECK(close_rel(g.eval(p).x, -std::exp(0.3) * std::cos(-0.6), 1e-14));
  CHECK(close_rel(g.eval(p).y, std::exp(0.3) * std::sin(-0.6), 1e-14));
  CHECK(g.eval(p).z == 0.0);
}

TEST_CASE("harmonic conjugate of x is y") {
  ScalarField psi = harmonic_conjugate(ScalarField("x"), Vec3{0, 0, 0});
  testutil::ExprGen gen(3);
  for (int i = 0; i < 10; ++i) {
    Vec3 p = gen.point();
    p.z = 0;
    CHECK(close(psi.eval(p), p.y, 1e-10));
  }
}

TEST_CASE("harmonic conjugate of x^2 - y^2 is 2xy, Cauchy-Riemann verified") {
  ScalarField ell("x^2 - y^2");
  ScalarField psi = harmonic_conjugate(ell, Vec3{0, 0, 0});
  Expr psi_x = psi.expr.diff(Var::X).simplified();
  Expr psi_y = psi.expr.diff(Var::Y).simplified();
  Expr m_ell_y = (-ell.expr.diff(Var::Y)).simplified();
  Expr ell_x = ell.expr.diff(Var::X).simplified();
  testutil::ExprGen gen(5);
  for (int i = 0; i < 10; ++i) {
    Vec3 p = gen.point();
    CHECK(close(psi.eval(p), 2.0 * p.x * p.y, 1e-9));
    CHECK(psi_x.eval(p) == m_ell_y.eval(p));
    CHECK(psi_y.eval(p) == ell_x.eval(p));
  }
}

TEST_CASE("harmonic conjugate demands a harmonic 2D input") {
  CHECK_THROWS_AS(harmonic_conjugate(ScalarField("x^2"), Vec3{0, 0, 0}), Error);
  CHECK_THROWS_AS(harmonic_conjugate(ScalarField("x + z"), Vec3{0, 0, 0}), Error);
  try {
    harmonic_conjugate(ScalarField("x^2"), Vec3{0, 0, 0});
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::ConditionFailed);
  }
}

TEST_CASE("harmonic conjugate gradients are orthogonal with equal norms") {
  ScalarField ell("exp(x)*sin(y)");
  ScalarField psi = harmonic_conjugate(ell, Vec3{0, 0, 0});
  VectorField ge = gradient(ell);
  VectorField gp = gradient(psi);
  auto pts = box_points(50, 197);
  for (const Vec3& p : pts) {
    Vec3 a = ge.eval(p);
    Vec3 b = gp.eval(p);
    CHECK(std::abs(dot(a, b)) <= 1e-8);
    CHECK(std::abs(norm(a) - norm(b)) <= 1e-8);
    // right-handed (grad ell, grad psi, z)
    CHECK(cross(a, b).z > 0.0);
  }
}

TEST_CASE("catalog charts carry the documented scale factors") {
  OrthoTriple cyl = catalog_chart("cylindrical");
  OrthoTriple pc = catalog_chart("parabolic_cylindrical");
  OrthoTriple par = catalog_chart("parabolic");

  auto pts = sample_box(Box{{-2, -2, -2}, {2, 2, 2}}, 100, 199, par.guard());
  VectorField pc_u = gradient(pc.ell), pc_v = gradient(pc.psi);
  VectorField par_xi = gradient(par.ell), par_eta = gradient(par.psi);
  VectorField cyl_r = gradient(cyl.ell), cyl_z = gradient(cyl.psi), cyl_az = gradient(cyl.theta);
  for (const Vec3& p : pts) {
    double r = std::sqrt(p.x * p.x + p.y * p.y);
    double rho = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (pc.guard().admits(p)) {
      CHECK(close_rel(norm(pc_u.eval_unguarded(p)), 1.0 / std::sqrt(2.0 * r), 1e-11));
      CHECK(close_rel(norm(pc_v.eval_unguarded(p)), 1.0 / std::sqrt(2.0 * r), 1e-11));
    }
    CHECK(close_rel(norm(par_xi.eval_unguarded(p)), 1.0 / std::sqrt(2.0 * rho), 1e-11));
    CHECK(close_rel(norm(par_eta.eval_unguarded(p)), 1.0 / std::sqrt(2.0 * rho), 1e-11));
    if (cyl.guard().admits(p)) {
      CHECK(close_rel(norm(cyl_r.eval_unguarded(p)), 1.0, 1e-12));
      CHECK(close_rel(norm(cyl_z.eval_unguarded(p)), 1.0, 1e-12));
      CHECK(close_rel(norm(cyl_az.eval_unguarded(p)), 1.0 / r, 1e-12));
    }
  }
  CHECK_THROWS_AS(catalog_chart("spherical"), Error);
}

TEST_CASE("tangent-basis identity on all catalog triples") {
  // w = |grad psi|^2 (cos theta d_psi + sin theta d_ell) with
  // d_ell = grad psi x grad theta / h, d_psi = grad theta x grad ell / h
  for (const auto& id : catalog_ids()) {
    CatalogEntry e = get_example(id);
    if (!e.triple) continue;
    VectorField ge = gradient(e.triple->ell);
    VectorField gp = gradient(e.triple->psi);
    VectorField gt = gradient(e.triple->theta);
    auto pts = sample_box(e.sample_box, 100, 211, e.triple->guard());
    for (const Vec3& p : pts) {
      Vec3 a = ge.eval_unguarded(p);
      Vec3 b = gp.eval_unguarded(p);
      Vec3 c = gt.eval_unguarded(p);
      double h = dot(a, cross(b, c));
      double tv = e.triple->theta.expr.eval(p);
      Vec3 d_ell = cross(b, c) / h;
      Vec3 d_psi = cross(c, a) / h;
      Vec3 via_tangent = dot(b, b) * (std::cos(tv) * d_psi + std::sin(tv) * d_ell);
      Vec3 direct = e.field.eval_unguarded(p);
      CAPTURE(id);
      CHECK(norm_inf(via_tangent - direct) <= 1e-10 * (1.0 + norm(direct)));
    }
  }
}

TEST_SUITE_END();
