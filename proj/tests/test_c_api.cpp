// Exercises the shared-library surface only (beltrami.h).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "beltrami/beltrami.h"

namespace {

const double kBox[6] = {-2, 2, -2, 2, -2, 2};
const uint64_t kSeed = 777;

struct Str {
  char* s = nullptr;
  ~Str() { bf_string_free(s); }
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE_BEGIN("c_api");

TEST_CASE("version and error plumbing") {
  CHECK(bf_version() != nullptr);
  CHECK(bf_last_error() != nullptr);

  bf_expr* e = nullptr;
  CHECK(bf_expr_parse("x cos z", &e) == BF_ERR_PARSE);
  CHECK(std::string(bf_last_error()).find("byte") != std::string::npos);
  CHECK(bf_expr_parse(nullptr, &e) == BF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("expression lifecycle") {
  bf_expr* e = nullptr;
  REQUIRE(bf_expr_parse("x^2 + sin(y)", &e) == BF_OK);
  double v = 0.0;
  CHECK(bf_expr_eval(e, 2, 0, 0, &v) == BF_OK);
  CHECK(v == 4.0);

  bf_expr* d = nullptr;
  REQUIRE(bf_expr_diff(e, 0, &d) == BF_OK);
  CHECK(bf_expr_eval(d, 2, 0, 0, &v) == BF_OK);
  CHECK(v == 4.0);  // d(x^2)/dx = 2x

  Str text;
  CHECK(bf_expr_to_string(d, &text.s) == BF_OK);
  bf_expr* reparsed = nullptr;
  CHECK(bf_expr_parse(text.s, &reparsed) == BF_OK);

  bf_expr* s = nullptr;
  bf_expr* zero = nullptr;
  REQUIRE(bf_expr_parse("0*x + 0", &zero) == BF_OK);
  REQUIRE(bf_expr_simplify(zero, &s) == BF_OK);
  Str stext;
  CHECK(bf_expr_to_string(s, &stext.s) == BF_OK);
  CHECK(std::string(stext.s) == "0");

  double nope;
  CHECK(bf_expr_eval(e, 0, 0, 0, &nope) == BF_OK);
  bf_expr* logx = nullptr;
  REQUIRE(bf_expr_parse("log(x)", &logx) == BF_OK);
  CHECK(bf_expr_eval(logx, 0, 0, 0, &nope) == BF_ERR_DOMAIN);

  bf_expr_free(e);
  bf_expr_free(d);
  bf_expr_free(reparsed);
  bf_expr_free(s);
  bf_expr_free(zero);
  bf_expr_free(logx);
}

TEST_CASE("fields, curl and helicity") {
  bf_field* w = nullptr;
  REQUIRE(bf_field_create("sin(z)", "cos(z)", "0", nullptr, &w) == BF_OK);
  double p[3] = {0, 0, 1};
  double v[3];
  CHECK(bf_field_eval(w, p, v) == BF_OK);
  CHECK(v[0] == doctest::Approx(std::sin(1.0)).epsilon(1e-15));

  bf_field* c = nullptr;
  REQUIRE(bf_field_curl(w, &c) == BF_OK);
  double cv[3];
  CHECK(bf_field_eval(c, p, cv) == BF_OK);
  CHECK(cv[0] == doctest::Approx(v[0]).epsilon(1e-15));
  CHECK(cv[1] == doctest::Approx(v[1]).epsilon(1e-15));

  double h = 0.0;
  CHECK(bf_field_helicity(w, p, &h) == BF_OK);
  CHECK(h == doctest::Approx(1.0).epsilon(1e-15));

  double div = 1.0;
  CHECK(bf_field_divergence_eval(w, p, &div) == BF_OK);
  CHECK(div == 0.0);

  double fd[3];
  CHECK(bf_field_fd_curl(w, p, 1e-4, fd) == BF_OK);
  CHECK(std::abs(fd[0] - v[0]) <= 1e-8);
  CHECK(bf_field_fd_curl(w, p, -1.0, fd) == BF_ERR_INVALID_ARGUMENT);

  double factor = 0.0;
  CHECK(bf_proportionality_factor(w, p, &factor) == BF_OK);
  CHECK(factor == doctest::Approx(1.0).epsilon(1e-14));

  bf_field_free(c);
  bf_field_free(w);
}

TEST_CASE("guards flow through the C surface") {
  bf_field* w = nullptr;
  REQUIRE(bf_field_create("x/(x^2+y^2)", "y/(x^2+y^2)", "0", "x^2 + y^2 >= 0.0025", &w) == BF_OK);
  double origin[3] = {0, 0, 0};
  double v[3];
  CHECK(bf_field_eval(w, origin, v) == BF_ERR_GUARD);
  Str guard;
  CHECK(bf_field_guard(w, &guard.s) == BF_OK);
  CHECK(std::string(guard.s).find("0.0025") != std::string::npos);
  bf_field_free(w);
}

TEST_CASE("triples: conditions, construction, invariants") {
  bf_triple* t = nullptr;
  REQUIRE(bf_triple_create("z", "(x - y)/sqrt(2)", "exp(x + y)/sqrt(2)", nullptr, &t) == BF_OK);

  bf_conditions* cond = nullptr;
  REQUIRE(bf_check_construction(t, "exp(x + y)", kBox, 100, kSeed, 1e-9, &cond) == BF_OK);
  CHECK(bf_conditions_all_pass(cond) == 1);
  CHECK(bf_conditions_count(cond) == 5);
  const char* name = nullptr;
  double res = 1.0;
  double worst[3];
  int pass = 0;
  CHECK(bf_conditions_item(cond, 0, &name, &res, worst, &pass) == BF_OK);
  CHECK(res <= 1e-12);
  CHECK(pass == 1);
  bf_conditions_free(cond);

  bf_conditions* rep = nullptr;
  REQUIRE(bf_check_representation(t, kBox, 100, kSeed, 1e-9, &rep) == BF_OK);
  CHECK(bf_conditions_all_pass(rep) == 1);
  CHECK(bf_conditions_count(rep) == 2);
  bf_conditions_free(rep);

  bf_field* w = nullptr;
  bf_field* w_star = nullptr;
  int sigma = 0;
  bf_expr* factor = nullptr;
  REQUIRE(bf_build_beltrami(t, kBox, 50, kSeed, &w, &w_star, &sigma, &factor) == BF_OK);
  CHECK(sigma == 1);
  double fv = 0.0;
  CHECK(bf_expr_eval(factor, 0, 0, 0, &fv) == BF_OK);
  CHECK(fv == doctest::Approx(1.0).epsilon(1e-12));  // sigma |grad theta| = exp(0)

  double th_res = 1.0, L_res = 1.0;
  CHECK(bf_invariant_check(w, t, kBox, 100, kSeed, &th_res, &L_res) == BF_OK);
  CHECK(th_res <= 1e-12);
  CHECK(L_res <= 1e-12);

  double nambu = 1.0;
  CHECK(bf_nambu_check(w, t, kBox, 100, kSeed, &nambu) == BF_OK);
  CHECK(nambu <= 1e-10);

  double cont = 1.0;
  CHECK(bf_continuity_ideal_gas(w, 1.0, 1.0, kBox, 100, kSeed, &cont) == BF_OK);
  CHECK(cont <= 1e-10);

  bf_expr_free(factor);
  bf_field_free(w);
  bf_field_free(w_star);
  bf_triple_free(t);
}

TEST_CASE("profile and ratio builders") {
  bf_triple* t = nullptr;
  REQUIRE(bf_triple_create("y", "x", "z", nullptr, &t) == BF_OK);
  bf_field* w = nullptr;
  int sigma = 0;
  bf_expr* factor = nullptr;
  REQUIRE(bf_build_beltrami_profile(t, "2*s", kBox, 20, kSeed, &w, nullptr, &sigma, &factor) ==
          BF_OK);
  CHECK(sigma == -1);
  double fv = 0.0;
  CHECK(bf_expr_eval(factor, 0.3, 0.4, 0.5, &fv) == BF_OK);
  CHECK(fv == doctest::Approx(-2.0).epsilon(1e-13));
  bf_expr_free(factor);
  bf_field_free(w);
  bf_triple_free(t);

  bf_field* rw = nullptr;
  bf_expr* rfactor = nullptr;
  REQUIRE(bf_build_beltrami_ratio("x", "y", "z", "s", nullptr, kBox, 20, kSeed, 1e-9, &rw,
                                  &sigma, &rfactor) == BF_OK);
  CHECK(sigma == 1);
  CHECK(bf_expr_eval(rfactor, 0, 0, 1, &fv) == BF_OK);
  CHECK(fv == doctest::Approx(0.5).epsilon(1e-13));  // 1/(1+z^2) at z=1
  bf_expr_free(rfactor);
  bf_field_free(rw);

  CHECK(bf_build_beltrami_ratio("x", "x + y", "z", "s", nullptr, kBox, 20, kSeed, 1e-9, &rw,
                                &sigma, &rfactor) == BF_ERR_CONDITION_FAILED);
}

TEST_CASE("planar frame and harmonic conjugate") {
  double n[3] = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0};
  bf_triple* t = nullptr;
  int sign_change = 1;
  REQUIRE(bf_planar_frame(n, "exp(sqrt(2)*s)", "exp(sqrt(2)*s)/sqrt(2)", -4, 4, &t,
                          &sign_change) == BF_OK);
  CHECK(sign_change == 0);
  bf_expr* theta = nullptr;
  REQUIRE(bf_triple_coordinate(t, 2, &theta) == BF_OK);
  double v = 0.0;
  CHECK(bf_expr_eval(theta, 0.3, 0.4, 0, &v) == BF_OK);
  CHECK(v == doctest::Approx(std::exp(0.7) / std::sqrt(2.0)).epsilon(1e-12));
  bf_expr_free(theta);
  bf_triple_free(t);

  double anchor[3] = {0, 0, 0};
  bf_expr* psi = nullptr;
  REQUIRE(bf_harmonic_conjugate("exp(x)*sin(y)", anchor, &psi) == BF_OK);
  CHECK(bf_expr_eval(psi, 0.5, 0.5, 0, &v) == BF_OK);
  CHECK(std::abs(v - (-std::exp(0.5) * std::cos(0.5) + 1.0)) <= 1e-8);
  bf_expr_free(psi);

  bf_triple* ht = nullptr;
  REQUIRE(bf_harmonic_triple("exp(x)*sin(y)", anchor, &ht) == BF_OK);
  bf_field* w = nullptr;
  int sigma = 0;
  double small_box[6] = {-1, 1, -1, 1, -1, 1};
  REQUIRE(bf_build_beltrami(ht, small_box, 20, kSeed, &w, nullptr, &sigma, nullptr) == BF_OK);
  double fp = 0.0;
  double p[3] = {0.2, -0.3, 0.4};
  CHECK(bf_proportionality_factor(w, p, &fp) == BF_OK);
  CHECK(fp == doctest::Approx(1.0).epsilon(1e-10));
  bf_field_free(w);
  bf_triple_free(ht);

  CHECK(bf_harmonic_conjugate("x^2", anchor, &psi) == BF_ERR_CONDITION_FAILED);

  bf_triple* chart = nullptr;
  REQUIRE(bf_catalog_chart("parabolic", &chart) == BF_OK);
  bf_triple_free(chart);
  CHECK(bf_catalog_chart("spherical", &chart) == BF_ERR_UNKNOWN_ID);
}

TEST_CASE("verification reports") {
  bf_field* w = nullptr;
  REQUIRE(bf_field_create("sin(z)", "cos(z)", "0", nullptr, &w) == BF_OK);
  bf_report* rep = nullptr;
  REQUIRE(bf_verify(w, kBox, 200, kSeed, 1e-8, "1", "0", &rep) == BF_OK);
  CHECK(bf_report_pass(rep) == 1);
  CHECK(bf_report_classification(rep) == BF_CLASS_NONTRIVIAL_BELTRAMI);
  CHECK(bf_report_strong(rep) == 1);
  CHECK(bf_report_alignment_residual(rep) <= 1e-12);
  CHECK(bf_report_point_count(rep) == 200);
  double mean, var, min_abs;
  CHECK(bf_report_hhat_stats(rep, &mean, &var, &min_abs) == BF_OK);
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bf_report_expected_hhat_residual(rep) <= 1e-12);
  CHECK(bf_report_expected_div_residual(rep) <= 1e-12);
  Str text;
  CHECK(bf_report_text(rep, &text.s) == BF_OK);
  CHECK(std::string(text.s).find("pass") != std::string::npos);
  bf_report_free(rep);

  bf_class cls;
  bf_field* lam = nullptr;
  REQUIRE(bf_field_create("y", "0", "0", nullptr, &lam) == BF_OK);
  CHECK(bf_classify(lam, kBox, 200, kSeed, &cls) == BF_OK);
  CHECK(cls == BF_CLASS_COMPLEX_LAMELLAR);
  bf_field_free(lam);
  bf_field_free(w);
}

TEST_CASE("streamlines through the C surface") {
  bf_field* w = nullptr;
  bf_triple* t = nullptr;
  REQUIRE(bf_field_create("sin(z)", "cos(z)", "0", nullptr, &w) == BF_OK);
  REQUIRE(bf_triple_create("x", "y", "z", nullptr, &t) == BF_OK);
  double x0[3] = {1, 0, 0};
  bf_streamline* s = nullptr;
  REQUIRE(bf_trace(w, t, x0, 10.0, 1e-10, 1e-12, 0.5, &s) == BF_OK);
  CHECK(bf_streamline_length(s) > 2);
  CHECK(bf_streamline_exited_domain(s) == 0);
  CHECK(bf_streamline_t_final(s) == doctest::Approx(10.0));

  double drift_theta = 1.0, drift_L = 1.0;
  CHECK(bf_streamline_drift(s, &drift_theta, &drift_L) == BF_OK);
  CHECK(drift_theta == 0.0);
  CHECK(drift_L <= 1e-12);

  size_t accepted = 0, rejected = 0;
  double max_err = 0.0;
  CHECK(bf_streamline_stats(s, &accepted, &rejected, &max_err) == BF_OK);
  CHECK(accepted == bf_streamline_length(s) - 1);

  double tval, p[3], theta, L;
  CHECK(bf_streamline_sample(s, 0, &tval, p, &theta, &L) == BF_OK);
  CHECK(tval == 0.0);
  CHECK(L == doctest::Approx(1.0));
  CHECK(bf_streamline_sample(s, 1u << 30, &tval, p, &theta, &L) == BF_ERR_INVALID_ARGUMENT);

  auto path = std::filesystem::temp_directory_path() / "beltrami_capi_stream.csv";
  CHECK(bf_streamline_write_csv(s, path.string().c_str()) == BF_OK);
  CHECK(read_file(path).rfind("t,x,y,z,theta,L_theta\n", 0) == 0);
  std::filesystem::remove(path);

  bf_streamline_free(s);
  bf_triple_free(t);
  bf_field_free(w);
}

TEST_CASE("specs through the C surface") {
  const char* text =
      "[spec]\nname = demo\nkind = vector_field\nw_x = sin(z)\nw_y = cos(z)\nw_z = 0\n"
      "[expected]\nhhat = 1\n";
  bf_spec* spec = nullptr;
  REQUIRE(bf_spec_parse(text, &spec) == BF_OK);
  CHECK(bf_spec_get_kind(spec) == BF_SPEC_VECTOR_FIELD);
  Str name;
  CHECK(bf_spec_name(spec, &name.s) == BF_OK);
  CHECK(std::string(name.s) == "demo");
  Str hhat, div;
  CHECK(bf_spec_expected(spec, &hhat.s, &div.s) == BF_OK);
  CHECK(hhat.s != nullptr);
  CHECK(div.s == nullptr);

  bf_field* w = nullptr;
  REQUIRE(bf_spec_field(spec, &w) == BF_OK);
  bf_triple* t = nullptr;
  CHECK(bf_spec_triple(spec, &t) == BF_ERR_INVALID_ARGUMENT);

  auto path = std::filesystem::temp_directory_path() / "beltrami_capi_spec.spec";
  CHECK(bf_spec_save(spec, path.string().c_str()) == BF_OK);
  bf_spec* loaded = nullptr;
  CHECK(bf_spec_load(path.string().c_str(), &loaded) == BF_OK);
  CHECK(bf_spec_get_kind(loaded) == BF_SPEC_VECTOR_FIELD);
  std::filesystem::remove(path);
  bf_spec_free(loaded);

  bf_spec* bad = nullptr;
  CHECK(bf_spec_parse("[spec]\nname = x\nkind = vector_field\nw_x = x\n", &bad) ==
        BF_ERR_SCHEMA);
  CHECK(std::string(bf_last_error()).find("w_y") != std::string::npos);

  bf_spec* planar = nullptr;
  double n[3] = {0, 0, 1};
  REQUIRE(bf_spec_from_planar("pf", n, "1", "s", &planar) == BF_OK);
  bf_triple* pt = nullptr;
  CHECK(bf_spec_triple(planar, &pt) == BF_OK);
  bf_triple_free(pt);
  bf_spec_free(planar);

  bf_spec* from_field = nullptr;
  REQUIRE(bf_spec_from_field("again", w, &from_field) == BF_OK);
  Str round;
  CHECK(bf_spec_to_string(from_field, &round.s) == BF_OK);
  CHECK(std::string(round.s).find("sin(z)") != std::string::npos);
  bf_spec_free(from_field);
  bf_field_free(w);
  bf_spec_free(spec);
}

TEST_CASE("grids through the C surface") {
  bf_field* w = nullptr;
  REQUIRE(bf_field_create("sin(z)", "cos(z)", "0", nullptr, &w) == BF_OK);
  bf_grid* g = nullptr;
  REQUIRE(bf_sample_grid(w, nullptr, kBox, 5, 5, 5, BF_EXTRA_HHAT, &g) == BF_OK);
  CHECK(bf_grid_node_count(g) == 125);
  CHECK(bf_grid_masked_count(g) == 0);
  auto path = std::filesystem::temp_directory_path() / "beltrami_capi_grid.vtk";
  CHECK(bf_grid_write_vtk(g, path.string().c_str()) == BF_OK);
  CHECK(read_file(path).find("POINT_DATA 125") != std::string::npos);
  std::filesystem::remove(path);
  bf_grid_free(g);

  CHECK(bf_sample_grid(w, nullptr, kBox, 1, 5, 5, 0, &g) == BF_ERR_INVALID_ARGUMENT);
  CHECK(bf_sample_grid(w, nullptr, kBox, 5, 5, 5, BF_EXTRA_THETA, &g) ==
        BF_ERR_INVALID_ARGUMENT);
  bf_field_free(w);
}

TEST_CASE("catalog through the C surface") {
  CHECK(bf_catalog_count() == 10);
  CHECK(bf_catalog_id(0) != nullptr);
  CHECK(bf_catalog_id(99) == nullptr);

  bf_field* f = nullptr;
  bf_triple* t = nullptr;
  Str hhat, div, desc, notes;
  double box[6];
  double seeds[15];
  int n_seeds = 0;
  REQUIRE(bf_catalog_get("b0", &f, &t, &hhat.s, &div.s, box, seeds, &n_seeds, &desc.s,
                         &notes.s) == BF_OK);
  CHECK(std::string(hhat.s) == "1");
  CHECK(n_seeds == 5);
  CHECK(t != nullptr);
  CHECK(box[1] == 2.0);
  bf_field_free(f);
  bf_triple_free(t);

  bf_triple* abc_triple = reinterpret_cast<bf_triple*>(1);
  REQUIRE(bf_catalog_get("abc", nullptr, &abc_triple, nullptr, nullptr, nullptr, nullptr,
                         nullptr, nullptr, nullptr) == BF_OK);
  CHECK(abc_triple == nullptr);

  CHECK(bf_catalog_get("ex9", &f, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                       nullptr) == BF_ERR_UNKNOWN_ID);
}

TEST_SUITE_END();
