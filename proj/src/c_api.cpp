#include "beltrami/beltrami.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "beltrami/catalog.hpp"
#include "beltrami/expr.hpp"
#include "beltrami/fields.hpp"
#include "beltrami/fieldspec.hpp"
#include "beltrami/flow.hpp"
#include "beltrami/frames.hpp"
#include "beltrami/grid.hpp"
#include "beltrami/verify.hpp"

using namespace beltrami;

struct bf_expr { Expr v; };
struct bf_field { VectorField v; };
struct bf_triple { OrthoTriple v; };
struct bf_report { BeltramiReport v; };
struct bf_conditions { ConditionReport v; };
struct bf_streamline { Streamline v; };
struct bf_grid { GridSample v; };
struct bf_spec { FieldSpec v; };

namespace {

thread_local std::string g_last_error = "no error";

bf_status map_code(Error::Code c) {
  switch (c) {
    case Error::Code::Parse: return BF_ERR_PARSE;
    case Error::Code::Domain: return BF_ERR_DOMAIN;
    case Error::Code::Guard: return BF_ERR_GUARD;
    case Error::Code::Schema: return BF_ERR_SCHEMA;
    case Error::Code::InvalidArgument: return BF_ERR_INVALID_ARGUMENT;
    case Error::Code::ConditionFailed: return BF_ERR_CONDITION_FAILED;
    case Error::Code::SignInconsistent: return BF_ERR_SIGN_INCONSISTENT;
    case Error::Code::UnknownId: return BF_ERR_UNKNOWN_ID;
    case Error::Code::Io: return BF_ERR_IO;
    case Error::Code::StepUnderflow: return BF_ERR_STEP_UNDERFLOW;
  }
  return BF_ERR_INTERNAL;
}

template <typename F>
bf_status guarded(F&& body) {
  try {
    body();
    return BF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BF_ERR_INTERNAL;
  }
}

bf_status invalid(const char* message) {
  g_last_error = message;
  return BF_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Box to_box(const double box[6]) {
  if (!box) return Box{};
  return Box{{box[0], box[2], box[4]}, {box[1], box[3], box[5]}};
}

Guard parse_guard(const char* guard) {
  return guard ? Guard::parse(guard) : Guard::none();
}

std::vector<Vec3> draw_points(const double box[6], int n, uint64_t seed, const Guard& g) {
  if (n <= 0) throw Error(Error::Code::InvalidArgument, "point count must be positive");
  return sample_box(to_box(box), static_cast<std::size_t>(n), seed, g);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* bf_version(void) { return "1.0.0"; }

const char* bf_last_error(void) { return g_last_error.c_str(); }

void bf_string_free(char* s) { delete[] s; }

/* -- expressions -------------------------------------------------------- */

bf_status bf_expr_parse(const char* source, bf_expr** out) {
  if (!source || !out) return invalid("bf_expr_parse: NULL argument");
  return guarded([&] { *out = new bf_expr{Expr::parse(source)}; });
}

bf_status bf_expr_parse_profile(const char* source, bf_expr** out) {
  if (!source || !out) return invalid("bf_expr_parse_profile: NULL argument");
  return guarded([&] { *out = new bf_expr{Expr::parse_profile(source)}; });
}

bf_status bf_expr_to_string(const bf_expr* e, char** out) {
  if (!e || !out) return invalid("bf_expr_to_string: NULL argument");
  return guarded([&] { *out = dup_string(e->v.str()); });
}

bf_status bf_expr_eval(const bf_expr* e, double x, double y, double z, double* out) {
  if (!e || !out) return invalid("bf_expr_eval: NULL argument");
  return guarded([&] { *out = e->v.eval(Vec3{x, y, z}); });
}

bf_status bf_expr_diff(const bf_expr* e, int var, bf_expr** out) {
  if (!e || !out) return invalid("bf_expr_diff: NULL argument");
  if (var < 0 || var > 2) return invalid("bf_expr_diff: var must be 0, 1 or 2");
  return guarded([&] { *out = new bf_expr{e->v.diff(static_cast<Var>(var)).simplified()}; });
}

bf_status bf_expr_simplify(const bf_expr* e, bf_expr** out) {
  if (!e || !out) return invalid("bf_expr_simplify: NULL argument");
  return guarded([&] { *out = new bf_expr{e->v.simplified()}; });
}

void bf_expr_free(bf_expr* e) { delete e; }

/* -- vector fields ------------------------------------------------------ */

bf_status bf_field_create(const char* wx, const char* wy, const char* wz, const char* guard,
                          bf_field** out) {
  if (!wx || !wy || !wz || !out) return invalid("bf_field_create: NULL argument");
  return guarded([&] {
    *out = new bf_field{VectorField(Expr::parse(wx), Expr::parse(wy), Expr::parse(wz),
                                    parse_guard(guard))};
  });
}

bf_status bf_field_eval(const bf_field* w, const double p[3], double out[3]) {
  if (!w || !p || !out) return invalid("bf_field_eval: NULL argument");
  return guarded([&] {
    Vec3 v = w->v.eval(Vec3{p[0], p[1], p[2]});
    out[0] = v.x;
    out[1] = v.y;
    out[2] = v.z;
  });
}

bf_status bf_field_component(const bf_field* w, int i, bf_expr** out) {
  if (!w || !out) return invalid("bf_field_component: NULL argument");
  if (i < 0 || i > 2) return invalid("bf_field_component: index must be 0, 1 or 2");
  return guarded([&] { *out = new bf_expr{w->v.component(i)}; });
}

bf_status bf_field_guard(const bf_field* w, char** out) {
  if (!w || !out) return invalid("bf_field_guard: NULL argument");
  return guarded([&] { *out = dup_string(w->v.guard.source()); });
}

bf_status bf_field_curl(const bf_field* w, bf_field** out) {
  if (!w || !out) return invalid("bf_field_curl: NULL argument");
  return guarded([&] { *out = new bf_field{curl(w->v)}; });
}

bf_status bf_field_divergence_eval(const bf_field* w, const double p[3], double* out) {
  if (!w || !p || !out) return invalid("bf_field_divergence_eval: NULL argument");
  return guarded([&] { *out = divergence(w->v).eval(Vec3{p[0], p[1], p[2]}); });
}

bf_status bf_field_fd_curl(const bf_field* w, const double p[3], double h, double out[3]) {
  if (!w || !p || !out) return invalid("bf_field_fd_curl: NULL argument");
  if (!(h > 0.0)) return invalid("bf_field_fd_curl: step h must be positive");
  return guarded([&] {
    Vec3 v = fd_curl(w->v, Vec3{p[0], p[1], p[2]}, h);
    out[0] = v.x;
    out[1] = v.y;
    out[2] = v.z;
  });
}

bf_status bf_field_helicity(const bf_field* w, const double p[3], double* out) {
  if (!w || !p || !out) return invalid("bf_field_helicity: NULL argument");
  return guarded([&] { *out = helicity_density(w->v, Vec3{p[0], p[1], p[2]}); });
}

void bf_field_free(bf_field* w) { delete w; }

/* -- coordinate triples and construction -------------------------------- */

bf_status bf_triple_create(const char* ell, const char* psi, const char* theta,
                           const char* guard, bf_triple** out) {
  if (!ell || !psi || !theta || !out) return invalid("bf_triple_create: NULL argument");
  return guarded([&] {
    Guard g = parse_guard(guard);
    OrthoTriple t;
    t.ell = ScalarField(Expr::parse(ell), g);
    t.psi = ScalarField(Expr::parse(psi), g);
    t.theta = ScalarField(Expr::parse(theta), g);
    *out = new bf_triple{std::move(t)};
  });
}

bf_status bf_triple_coordinate(const bf_triple* t, int i, bf_expr** out) {
  if (!t || !out) return invalid("bf_triple_coordinate: NULL argument");
  if (i < 0 || i > 2) return invalid("bf_triple_coordinate: index must be 0, 1 or 2");
  return guarded([&] {
    const ScalarField& f = i == 0 ? t->v.ell : (i == 1 ? t->v.psi : t->v.theta);
    *out = new bf_expr{f.expr};
  });
}

bf_status bf_triple_guard(const bf_triple* t, char** out) {
  if (!t || !out) return invalid("bf_triple_guard: NULL argument");
  return guarded([&] { *out = dup_string(t->v.guard().source()); });
}

void bf_triple_free(bf_triple* t) { delete t; }

bf_status bf_check_construction(const bf_triple* t, const char* alpha, const double box[6],
                                int n_points, uint64_t seed, double tol, bf_conditions** out) {
  if (!t || !out) return invalid("bf_check_construction: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, t->v.guard());
    ScalarField alpha_field =
        alpha ? ScalarField(Expr::parse(alpha), t->v.guard())
              : ScalarField(sqrt(pow(t->v.theta.expr.diff(Var::X), 2) +
                                 pow(t->v.theta.expr.diff(Var::Y), 2) +
                                 pow(t->v.theta.expr.diff(Var::Z), 2))
                                .simplified(),
                            t->v.guard());
    *out = new bf_conditions{check_construction_conditions(t->v, alpha_field, pts, tol)};
  });
}

bf_status bf_check_representation(const bf_triple* t, const double box[6], int n_points,
                                  uint64_t seed, double tol, bf_conditions** out) {
  if (!t || !out) return invalid("bf_check_representation: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, t->v.guard());
    *out = new bf_conditions{check_representation_conditions(t->v, pts, tol)};
  });
}

int bf_conditions_count(const bf_conditions* c) {
  return c ? static_cast<int>(c->v.conditions.size()) : 0;
}

bf_status bf_conditions_item(const bf_conditions* c, int i, const char** name,
                             double* max_residual, double worst_point[3], int* pass) {
  if (!c) return invalid("bf_conditions_item: NULL argument");
  if (i < 0 || i >= static_cast<int>(c->v.conditions.size()))
    return invalid("bf_conditions_item: index out of range");
  const ConditionCheck& cc = c->v.conditions[static_cast<std::size_t>(i)];
  if (name) *name = cc.name.c_str();
  if (max_residual) *max_residual = cc.max_residual;
  if (worst_point) {
    worst_point[0] = cc.worst_point.x;
    worst_point[1] = cc.worst_point.y;
    worst_point[2] = cc.worst_point.z;
  }
  if (pass) *pass = cc.pass ? 1 : 0;
  return BF_OK;
}

int bf_conditions_all_pass(const bf_conditions* c) { return c && c->v.all_pass() ? 1 : 0; }

bf_status bf_conditions_text(const bf_conditions* c, char** out) {
  if (!c || !out) return invalid("bf_conditions_text: NULL argument");
  return guarded([&] { *out = dup_string(c->v.text()); });
}

void bf_conditions_free(bf_conditions* c) { delete c; }

static bf_status build_common(const bf_triple* t, const double box[6], int n_samples,
                              uint64_t seed, bf_field** w, bf_field** w_star, int* sigma,
                              bf_expr** expected_factor, const char* antiderivative) {
  if (!t) return invalid("bf_build_beltrami: NULL triple");
  return guarded([&] {
    auto pts = draw_points(box, n_samples, seed, t->v.guard());
    ConstructedPair pair =
        antiderivative ? build_beltrami_profile(t->v, Expr::parse_profile(antiderivative), pts)
                       : build_beltrami(t->v, pts);
    if (w) *w = new bf_field{std::move(pair.w)};
    if (w_star) *w_star = new bf_field{std::move(pair.w_star)};
    if (sigma) *sigma = pair.sigma;
    if (expected_factor) *expected_factor = new bf_expr{pair.expected_factor.expr};
  });
}

bf_status bf_build_beltrami(const bf_triple* t, const double box[6], int n_samples,
                            uint64_t seed, bf_field** w, bf_field** w_star, int* sigma,
                            bf_expr** expected_factor) {
  return build_common(t, box, n_samples, seed, w, w_star, sigma, expected_factor, nullptr);
}

bf_status bf_build_beltrami_profile(const bf_triple* t, const char* antiderivative,
                                    const double box[6], int n_samples, uint64_t seed,
                                    bf_field** w, bf_field** w_star, int* sigma,
                                    bf_expr** expected_factor) {
  if (!antiderivative) return invalid("bf_build_beltrami_profile: NULL antiderivative");
  return build_common(t, box, n_samples, seed, w, w_star, sigma, expected_factor,
                      antiderivative);
}

bf_status bf_build_beltrami_ratio(const char* alpha, const char* beta, const char* gamma,
                                  const char* f, const char* guard, const double box[6],
                                  int n_samples, uint64_t seed, double tol, bf_field** w,
                                  int* sigma, bf_expr** expected_factor) {
  if (!alpha || !beta || !gamma || !f) return invalid("bf_build_beltrami_ratio: NULL argument");
  return guarded([&] {
    Guard g = parse_guard(guard);
    ScalarField a(Expr::parse(alpha), g), b(Expr::parse(beta), g), c(Expr::parse(gamma), g);
    auto pts = draw_points(box, n_samples, seed, g);
    RatioField rf = build_beltrami_ratio(a, b, c, Expr::parse_profile(f), pts, tol);
    if (w) *w = new bf_field{std::move(rf.w)};
    if (sigma) *sigma = rf.sigma;
    if (expected_factor) *expected_factor = new bf_expr{rf.expected_factor.expr};
  });
}

bf_status bf_planar_frame(const double n[3], const char* g, const char* G, double s_min,
                          double s_max, bf_triple** out, int* g_sign_change) {
  if (!n || !g || !out) return invalid("bf_planar_frame: NULL argument");
  return guarded([&] {
    std::optional<Expr> anti;
    if (G) anti = Expr::parse_profile(G);
    PlanarFrame frame =
        planar_frame(Vec3{n[0], n[1], n[2]}, Expr::parse_profile(g), anti, s_min, s_max);
    if (g_sign_change) *g_sign_change = frame.g_sign_change ? 1 : 0;
    *out = new bf_triple{std::move(frame.triple)};
  });
}

bf_status bf_harmonic_conjugate(const char* ell, const double anchor[3], bf_expr** out) {
  if (!ell || !anchor || !out) return invalid("bf_harmonic_conjugate: NULL argument");
  return guarded([&] {
    ScalarField psi =
        harmonic_conjugate(ScalarField(Expr::parse(ell)), Vec3{anchor[0], anchor[1], anchor[2]});
    *out = new bf_expr{psi.expr};
  });
}

bf_status bf_harmonic_triple(const char* ell, const double anchor[3], bf_triple** out) {
  if (!ell || !anchor || !out) return invalid("bf_harmonic_triple: NULL argument");
  return guarded([&] {
    ScalarField ell_field{Expr::parse(ell)};
    ScalarField psi = harmonic_conjugate(ell_field, Vec3{anchor[0], anchor[1], anchor[2]});
    OrthoTriple t;
    t.ell = ell_field;
    t.psi = psi;
    t.theta = ScalarField(Expr::variable(Var::Z));
    *out = new bf_triple{std::move(t)};
  });
}

bf_status bf_catalog_chart(const char* name, bf_triple** out) {
  if (!name || !out) return invalid("bf_catalog_chart: NULL argument");
  return guarded([&] { *out = new bf_triple{catalog_chart(name)}; });
}

/* -- verification ------------------------------------------------------- */

bf_status bf_verify(const bf_field* w, const double box[6], int n_points, uint64_t seed,
                    double tol, const char* expected_hhat, const char* expected_div,
                    bf_report** out) {
  if (!w || !out) return invalid("bf_verify: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, w->v.guard);
    std::optional<ScalarField> eh, ed;
    if (expected_hhat) eh = ScalarField(Expr::parse(expected_hhat), w->v.guard);
    if (expected_div) ed = ScalarField(Expr::parse(expected_div), w->v.guard);
    *out = new bf_report{beltrami_residual(w->v, pts, tol, eh, ed)};
  });
}

double bf_report_alignment_residual(const bf_report* r) {
  return r ? r->v.max_alignment_residual : kNaN;
}

double bf_report_divergence_max(const bf_report* r) { return r ? r->v.divergence_max : kNaN; }

bf_class bf_report_classification(const bf_report* r) {
  if (!r) return BF_CLASS_NEITHER;
  switch (r->v.classification) {
    case FieldClass::NontrivialBeltrami: return BF_CLASS_NONTRIVIAL_BELTRAMI;
    case FieldClass::ComplexLamellar: return BF_CLASS_COMPLEX_LAMELLAR;
    case FieldClass::Neither: return BF_CLASS_NEITHER;
    case FieldClass::Degenerate: return BF_CLASS_DEGENERATE;
  }
  return BF_CLASS_NEITHER;
}

int bf_report_strong(const bf_report* r) { return r && r->v.strong_beltrami ? 1 : 0; }

bf_status bf_report_hhat_stats(const bf_report* r, double* mean, double* variance,
                               double* min_abs) {
  if (!r) return invalid("bf_report_hhat_stats: NULL report");
  if (mean) *mean = r->v.hhat_mean;
  if (variance) *variance = r->v.hhat_variance;
  if (min_abs) *min_abs = r->v.hhat_min_abs;
  return BF_OK;
}

double bf_report_expected_hhat_residual(const bf_report* r) {
  return r && r->v.hhat_expected_residual ? *r->v.hhat_expected_residual : kNaN;
}

double bf_report_expected_div_residual(const bf_report* r) {
  return r && r->v.divergence_expected_residual ? *r->v.divergence_expected_residual : kNaN;
}

size_t bf_report_point_count(const bf_report* r) { return r ? r->v.point_count : 0; }

int bf_report_pass(const bf_report* r) { return r && r->v.pass() ? 1 : 0; }

bf_status bf_report_text(const bf_report* r, char** out) {
  if (!r || !out) return invalid("bf_report_text: NULL argument");
  return guarded([&] { *out = dup_string(r->v.text()); });
}

void bf_report_free(bf_report* r) { delete r; }

bf_status bf_proportionality_factor(const bf_field* w, const double p[3], double* out) {
  if (!w || !p || !out) return invalid("bf_proportionality_factor: NULL argument");
  return guarded([&] { *out = proportionality_factor(w->v, Vec3{p[0], p[1], p[2]}); });
}

bf_status bf_classify(const bf_field* w, const double box[6], int n_points, uint64_t seed,
                      bf_class* out) {
  if (!w || !out) return invalid("bf_classify: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, w->v.guard);
    switch (classify(w->v, pts)) {
      case FieldClass::NontrivialBeltrami: *out = BF_CLASS_NONTRIVIAL_BELTRAMI; break;
      case FieldClass::ComplexLamellar: *out = BF_CLASS_COMPLEX_LAMELLAR; break;
      case FieldClass::Neither: *out = BF_CLASS_NEITHER; break;
      case FieldClass::Degenerate: *out = BF_CLASS_DEGENERATE; break;
    }
  });
}

bf_status bf_invariant_check(const bf_field* w, const bf_triple* t, const double box[6],
                             int n_points, uint64_t seed, double* theta_residual,
                             double* L_residual) {
  if (!w || !t) return invalid("bf_invariant_check: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, t->v.guard());
    InvariantResiduals res = invariant_gradient_check(w->v, t->v, pts);
    if (theta_residual) *theta_residual = res.theta;
    if (L_residual) *L_residual = res.L_theta;
  });
}

bf_status bf_nambu_check(const bf_field* w, const bf_triple* t, const double box[6],
                         int n_points, uint64_t seed, double* max_residual) {
  if (!w || !t || !max_residual) return invalid("bf_nambu_check: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, t->v.guard());
    *max_residual = nambu_identity_check(w->v, t->v, pts);
  });
}

bf_status bf_continuity_ideal_gas(const bf_field* w, double k, double c, const double box[6],
                                  int n_points, uint64_t seed, double* max_residual) {
  if (!w || !max_residual) return invalid("bf_continuity_ideal_gas: NULL argument");
  return guarded([&] {
    auto pts = draw_points(box, n_points, seed, w->v.guard);
    *max_residual = continuity_check_ideal_gas(w->v, k, c, pts);
  });
}

/* -- streamlines -------------------------------------------------------- */

bf_status bf_trace(const bf_field* w, const bf_triple* t, const double x0[3], double t_end,
                   double rtol, double atol, double max_step, bf_streamline** out) {
  if (!w || !x0 || !out) return invalid("bf_trace: NULL argument");
  return guarded([&] {
    StepControl ctrl;
    if (rtol > 0.0) ctrl.rtol = rtol;
    if (atol > 0.0) ctrl.atol = atol;
    if (max_step > 0.0) ctrl.max_step = max_step;
    *out = new bf_streamline{
        trace_streamline(w->v, Vec3{x0[0], x0[1], x0[2]}, t_end, ctrl, t ? &t->v : nullptr)};
  });
}

size_t bf_streamline_length(const bf_streamline* s) { return s ? s->v.times.size() : 0; }

bf_status bf_streamline_sample(const bf_streamline* s, size_t i, double* t, double p[3],
                               double* theta, double* L_theta) {
  if (!s) return invalid("bf_streamline_sample: NULL streamline");
  if (i >= s->v.times.size()) return invalid("bf_streamline_sample: index out of range");
  if (t) *t = s->v.times[i];
  if (p) {
    p[0] = s->v.points[i].x;
    p[1] = s->v.points[i].y;
    p[2] = s->v.points[i].z;
  }
  bool inv = s->v.has_invariants();
  if (theta) *theta = inv ? s->v.theta_values[i] : kNaN;
  if (L_theta) *L_theta = inv ? s->v.L_theta_values[i] : kNaN;
  return BF_OK;
}

bf_status bf_streamline_drift(const bf_streamline* s, double* theta_drift, double* L_drift) {
  if (!s) return invalid("bf_streamline_drift: NULL streamline");
  DriftReport d = invariant_drift(s->v);
  if (theta_drift) *theta_drift = d.theta_drift;
  if (L_drift) *L_drift = d.L_drift;
  return BF_OK;
}

int bf_streamline_exited_domain(const bf_streamline* s) {
  return s && s->v.exited_domain ? 1 : 0;
}

double bf_streamline_t_final(const bf_streamline* s) { return s ? s->v.t_final : kNaN; }

bf_status bf_streamline_stats(const bf_streamline* s, size_t* accepted, size_t* rejected,
                              double* max_error_estimate) {
  if (!s) return invalid("bf_streamline_stats: NULL streamline");
  if (accepted) *accepted = s->v.stats.accepted;
  if (rejected) *rejected = s->v.stats.rejected;
  if (max_error_estimate) *max_error_estimate = s->v.stats.max_error_estimate;
  return BF_OK;
}

bf_status bf_streamline_write_csv(const bf_streamline* s, const char* path) {
  if (!s || !path) return invalid("bf_streamline_write_csv: NULL argument");
  return guarded([&] { write_csv(s->v, path); });
}

void bf_streamline_free(bf_streamline* s) { delete s; }

/* -- field-spec files --------------------------------------------------- */

bf_status bf_spec_load(const char* path, bf_spec** out) {
  if (!path || !out) return invalid("bf_spec_load: NULL argument");
  return guarded([&] { *out = new bf_spec{load_field_spec(path)}; });
}

bf_status bf_spec_parse(const char* text, bf_spec** out) {
  if (!text || !out) return invalid("bf_spec_parse: NULL argument");
  return guarded([&] { *out = new bf_spec{parse_field_spec(text)}; });
}

bf_status bf_spec_save(const bf_spec* s, const char* path) {
  if (!s || !path) return invalid("bf_spec_save: NULL argument");
  return guarded([&] { save_field_spec(s->v, path); });
}

bf_status bf_spec_to_string(const bf_spec* s, char** out) {
  if (!s || !out) return invalid("bf_spec_to_string: NULL argument");
  return guarded([&] { *out = dup_string(serialize_field_spec(s->v)); });
}

bf_status bf_spec_name(const bf_spec* s, char** out) {
  if (!s || !out) return invalid("bf_spec_name: NULL argument");
  return guarded([&] { *out = dup_string(s->v.name); });
}

bf_spec_kind bf_spec_get_kind(const bf_spec* s) {
  if (!s) return BF_SPEC_VECTOR_FIELD;
  switch (s->v.kind) {
    case SpecKind::VectorField: return BF_SPEC_VECTOR_FIELD;
    case SpecKind::OrthoTriple: return BF_SPEC_ORTHO_TRIPLE;
    case SpecKind::PlanarFrame: return BF_SPEC_PLANAR_FRAME;
  }
  return BF_SPEC_VECTOR_FIELD;
}

bf_status bf_spec_expected(const bf_spec* s, char** hhat, char** div) {
  if (!s) return invalid("bf_spec_expected: NULL spec");
  if (hhat) *hhat = s->v.expected_hhat ? dup_string(*s->v.expected_hhat) : nullptr;
  if (div) *div = s->v.expected_div ? dup_string(*s->v.expected_div) : nullptr;
  return BF_OK;
}

bf_status bf_spec_field(const bf_spec* s, bf_field** out) {
  if (!s || !out) return invalid("bf_spec_field: NULL argument");
  return guarded([&] { *out = new bf_field{s->v.make_vector_field()}; });
}

bf_status bf_spec_triple(const bf_spec* s, bf_triple** out) {
  if (!s || !out) return invalid("bf_spec_triple: NULL argument");
  return guarded([&] { *out = new bf_triple{s->v.make_triple()}; });
}

bf_status bf_spec_from_field(const char* name, const bf_field* w, bf_spec** out) {
  if (!name || !w || !out) return invalid("bf_spec_from_field: NULL argument");
  return guarded([&] { *out = new bf_spec{spec_from_vector_field(name, w->v)}; });
}

bf_status bf_spec_from_triple(const char* name, const bf_triple* t, bf_spec** out) {
  if (!name || !t || !out) return invalid("bf_spec_from_triple: NULL argument");
  return guarded([&] { *out = new bf_spec{spec_from_triple(name, t->v)}; });
}

bf_status bf_spec_from_planar(const char* name, const double n[3], const char* g, const char* G,
                              bf_spec** out) {
  if (!name || !n || !g || !out) return invalid("bf_spec_from_planar: NULL argument");
  return guarded([&] {
    Expr::parse_profile(g);  // validate
    if (G) Expr::parse_profile(G);
    FieldSpec spec;
    spec.name = name;
    spec.kind = SpecKind::PlanarFrame;
    spec.normal = Vec3{n[0], n[1], n[2]};
    spec.g_source = g;
    if (G) spec.G_source = G;
    *out = new bf_spec{std::move(spec)};
  });
}

void bf_spec_free(bf_spec* s) { delete s; }

/* -- grid sampling and export ------------------------------------------- */

bf_status bf_sample_grid(const bf_field* w, const bf_triple* t, const double box[6], int nx,
                         int ny, int nz, unsigned extras, bf_grid** out) {
  if (!w || !box || !out) return invalid("bf_sample_grid: NULL argument");
  return guarded([&] {
    GridExtras ge;
    ge.hhat = (extras & BF_EXTRA_HHAT) != 0;
    ge.theta = (extras & BF_EXTRA_THETA) != 0;
    ge.L_theta = (extras & BF_EXTRA_L_THETA) != 0;
    *out = new bf_grid{sample_grid(w->v, to_box(box), nx, ny, nz, ge, t ? &t->v : nullptr)};
  });
}

size_t bf_grid_node_count(const bf_grid* g) { return g ? g->v.node_count() : 0; }

size_t bf_grid_masked_count(const bf_grid* g) { return g ? g->v.masked_count : 0; }

bf_status bf_grid_write_vtk(const bf_grid* g, const char* path) {
  if (!g || !path) return invalid("bf_grid_write_vtk: NULL argument");
  return guarded([&] { write_vtk(g->v, path); });
}

bf_status bf_grid_write_csv(const bf_grid* g, const char* path) {
  if (!g || !path) return invalid("bf_grid_write_csv: NULL argument");
  return guarded([&] { write_csv(g->v, path); });
}

void bf_grid_free(bf_grid* g) { delete g; }

/* -- catalog ------------------------------------------------------------ */

int bf_catalog_count(void) { return static_cast<int>(catalog_ids().size()); }

const char* bf_catalog_id(int i) {
  static const std::vector<std::string> ids = catalog_ids();
  if (i < 0 || i >= static_cast<int>(ids.size())) return nullptr;
  return ids[static_cast<std::size_t>(i)].c_str();
}

bf_status bf_catalog_get(const char* id, bf_field** field, bf_triple** triple,
                         char** expected_hhat, char** expected_div, double box[6],
                         double seeds[15], int* n_seeds, char** description, char** notes) {
  if (!id) return invalid("bf_catalog_get: NULL id");
  return guarded([&] {
    CatalogEntry e = get_example(id);
    if (field) *field = new bf_field{e.field};
    if (triple) *triple = e.triple ? new bf_triple{*e.triple} : nullptr;
    if (expected_hhat) *expected_hhat = dup_string(e.expected_hhat.expr.str());
    if (expected_div) *expected_div = dup_string(e.expected_div.expr.str());
    if (box) {
      box[0] = e.sample_box.lo.x;
      box[1] = e.sample_box.hi.x;
      box[2] = e.sample_box.lo.y;
      box[3] = e.sample_box.hi.y;
      box[4] = e.sample_box.lo.z;
      box[5] = e.sample_box.hi.z;
    }
    if (n_seeds) *n_seeds = static_cast<int>(std::min<std::size_t>(e.flow_seeds.size(), 5));
    if (seeds) {
      for (std::size_t i = 0; i < 5 && i < e.flow_seeds.size(); ++i) {
        seeds[3 * i] = e.flow_seeds[i].x;
        seeds[3 * i + 1] = e.flow_seeds[i].y;
        seeds[3 * i + 2] = e.flow_seeds[i].z;
      }
    }
    if (description) *description = dup_string(e.description);
    if (notes) *notes = dup_string(e.notes);
  });
}

} /* extern "C" */
