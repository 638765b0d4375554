// Command-line front end. Uses only the public C API (beltrami.h) of the
// shared library.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beltrami/beltrami.h"

namespace {

struct StringOut {
  char* s = nullptr;
  ~StringOut() { bf_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context << ": " << bf_last_error() << "\n";
  std::exit(2);
}

void check(bf_status st, const std::string& context) {
  if (st != BF_OK) die(context);
}

uint64_t default_seed() {
  if (const char* env = std::getenv("BELTRAMI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed BELTRAMI_SEED '" << env << "'\n";
    }
  }
  return 20250810u;
}

bool parse_csv_doubles(const std::string& text, double* out, int n) {
  std::string t = text;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  for (int i = 0; i < n; ++i)
    if (!(in >> out[i])) return false;
  double extra;
  return !(in >> extra);
}

struct Source {
  // Either a spec file or a catalog entry.
  std::unique_ptr<bf_spec, decltype(&bf_spec_free)> spec{nullptr, bf_spec_free};
  std::unique_ptr<bf_field, decltype(&bf_field_free)> field{nullptr, bf_field_free};
  std::unique_ptr<bf_triple, decltype(&bf_triple_free)> triple{nullptr, bf_triple_free};
  std::string expected_hhat, expected_div;  // empty = none
  bool from_catalog = false;
  double box[6] = {-2, 2, -2, 2, -2, 2};
  bool has_box = false;
  double seeds[15] = {};
  int n_seeds = 0;
};

Source open_source(const std::string& arg) {
  Source src;
  if (std::filesystem::exists(arg)) {
    bf_spec* spec = nullptr;
    check(bf_spec_load(arg.c_str(), &spec), "loading spec '" + arg + "'");
    src.spec.reset(spec);
    if (bf_spec_get_kind(spec) == BF_SPEC_VECTOR_FIELD) {
      bf_field* f = nullptr;
      check(bf_spec_field(spec, &f), "building field from spec");
      src.field.reset(f);
    } else {
      bf_triple* t = nullptr;
      check(bf_spec_triple(spec, &t), "building triple from spec");
      src.triple.reset(t);
    }
    StringOut hhat, div;
    check(bf_spec_expected(spec, &hhat.s, &div.s), "reading expected values");
    src.expected_hhat = hhat.str();
    src.expected_div = div.str();
    return src;
  }
  bf_field* f = nullptr;
  bf_triple* t = nullptr;
  StringOut hhat, div;
  bf_status st = bf_catalog_get(arg.c_str(), &f, &t, &hhat.s, &div.s, src.box, src.seeds,
                                &src.n_seeds, nullptr, nullptr);
  if (st != BF_OK) {
    std::cerr << "error: '" << arg << "' is neither a spec file nor a catalog id: "
              << bf_last_error() << "\n";
    std::exit(2);
  }
  src.field.reset(f);
  src.triple.reset(t);
  src.expected_hhat = hhat.str();
  src.expected_div = div.str();
  src.from_catalog = true;
  src.has_box = true;
  return src;
}

// Build the field for a triple-backed source (construct w first).
bf_field* field_of(Source& src, const double box[6], int points, uint64_t seed) {
  if (src.field) return src.field.get();
  bf_field* w = nullptr;
  check(bf_build_beltrami(src.triple.get(), box, points < 9 ? 9 : points, seed, &w, nullptr,
                          nullptr, nullptr),
        "constructing field from triple");
  src.field.reset(w);
  return w;
}

int cmd_verify(const std::string& what, int points, uint64_t seed, std::string box_text,
               double tol) {
  Source src = open_source(what);
  double box[6];
  if (!box_text.empty()) {
    if (!parse_csv_doubles(box_text, box, 6)) {
      std::cerr << "error: --box needs xmin,xmax,ymin,ymax,zmin,zmax\n";
      return 2;
    }
  } else {
    for (int i = 0; i < 6; ++i) box[i] = src.box[i];
  }
  bf_field* w = field_of(src, box, points, seed);
  bf_report* rep = nullptr;
  check(bf_verify(w, box, points, seed, tol,
                  src.expected_hhat.empty() ? nullptr : src.expected_hhat.c_str(),
                  src.expected_div.empty() ? nullptr : src.expected_div.c_str(), &rep),
        "verifying field");
  StringOut text;
  check(bf_report_text(rep, &text.s), "rendering report");
  std::cout << text.str();
  int ok = bf_report_pass(rep);
  bf_report_free(rep);
  return ok ? 0 : 1;
}

int cmd_construct(const std::string& what, bool star, int points, uint64_t seed,
                  std::string box_text, double tol, const std::string& out_path) {
  Source src = open_source(what);
  if (!src.triple) {
    std::cerr << "error: construct needs an ortho_triple or planar_frame spec (or a catalog "
                 "entry with a triple)\n";
    return 2;
  }
  double box[6];
  if (!box_text.empty()) {
    if (!parse_csv_doubles(box_text, box, 6)) {
      std::cerr << "error: --box needs xmin,xmax,ymin,ymax,zmin,zmax\n";
      return 2;
    }
  } else {
    for (int i = 0; i < 6; ++i) box[i] = src.box[i];
  }

  bf_conditions* cond = nullptr;
  check(bf_check_construction(src.triple.get(), nullptr, box, points, seed, tol, &cond),
        "checking construction conditions");
  StringOut cond_text;
  check(bf_conditions_text(cond, &cond_text.s), "rendering conditions");
  std::cout << "construction conditions (alpha = |grad theta|):\n" << cond_text.str() << "\n";
  // (the eikonal residual is trivially zero under this alpha; the
  // orthogonality and equal-scale-factor checks carry the information)
  bool conditions_ok = bf_conditions_all_pass(cond);
  bf_conditions_free(cond);

  bf_field* w = nullptr;
  bf_field* w_star = nullptr;
  int sigma = 0;
  bf_expr* factor = nullptr;
  check(bf_build_beltrami(src.triple.get(), box, points < 9 ? 9 : points, seed, &w,
                          star ? &w_star : nullptr, &sigma, &factor),
        "building Beltrami pair");

  auto print_field = [](const char* label, bf_field* f) {
    std::cout << label << ":\n";
    for (int i = 0; i < 3; ++i) {
      bf_expr* comp = nullptr;
      check(bf_field_component(f, i, &comp), "reading component");
      StringOut text;
      check(bf_expr_to_string(comp, &text.s), "printing component");
      std::cout << "  w_" << "xyz"[i] << " = " << text.str() << "\n";
      bf_expr_free(comp);
    }
  };
  print_field("w = cos(theta) grad psi + sin(theta) grad ell", w);
  StringOut factor_text;
  check(bf_expr_to_string(factor, &factor_text.s), "printing factor");
  std::cout << "sigma = " << (sigma > 0 ? "+1" : "-1") << "\n";
  std::cout << "expected factor: curl w = (" << factor_text.str() << ") w\n";
  if (star) {
    print_field("w* = sin(theta) grad psi + cos(theta) grad ell", w_star);
    std::cout << "expected factor: curl w* = -(" << factor_text.str() << ") w*\n";
  }

  bf_report* rep = nullptr;
  check(bf_verify(w, box, points, seed, 1e-8, nullptr, nullptr, &rep), "verifying built field");
  double align = bf_report_alignment_residual(rep);
  std::cout << "alignment residual of w: " << align << "\n";
  bool verified = bf_report_pass(rep);
  bf_report_free(rep);

  if (!out_path.empty()) {
    bf_spec* spec = nullptr;
    check(bf_spec_from_field("constructed", w, &spec), "serializing field");
    check(bf_spec_save(spec, out_path.c_str()), "writing '" + out_path + "'");
    bf_spec_free(spec);
    std::cout << "wrote " << out_path << "\n";
  }

  bf_expr_free(factor);
  bf_field_free(w);
  if (w_star) bf_field_free(w_star);
  return conditions_ok && verified ? 0 : 1;
}

int cmd_planar(const std::string& n_text, const std::string& g_text, const std::string& G_text,
               const std::string& range_text, int points, uint64_t seed,
               const std::string& out_path) {
  double n[3];
  if (!parse_csv_doubles(n_text, n, 3)) {
    std::cerr << "error: --n needs three comma-separated numbers\n";
    return 2;
  }
  double mag = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (mag == 0.0) {
    std::cerr << "error: --n must be nonzero\n";
    return 2;
  }
  for (double& v : n) v /= mag;  // the frame expects a unit normal
  double range[2] = {-4.0, 4.0};
  if (!range_text.empty() && !parse_csv_doubles(range_text, range, 2)) {
    std::cerr << "error: --s-range needs lo,hi\n";
    return 2;
  }

  bf_triple* t = nullptr;
  int sign_change = 0;
  check(bf_planar_frame(n, g_text.c_str(), G_text.empty() ? nullptr : G_text.c_str(), range[0],
                        range[1], &t, &sign_change),
        "building planar frame");

  const char* names[3] = {"ell", "psi", "theta"};
  for (int i = 0; i < 3; ++i) {
    bf_expr* e = nullptr;
    check(bf_triple_coordinate(t, i, &e), "reading coordinate");
    StringOut text;
    check(bf_expr_to_string(e, &text.s), "printing coordinate");
    std::cout << names[i] << " = " << text.str() << "\n";
    bf_expr_free(e);
  }
  if (sign_change)
    std::cout << "WARNING: g changes sign on [" << range[0] << ", " << range[1]
              << "]; the eikonal right-hand side must keep one sign\n";

  double box[6] = {-1, 1, -1, 1, -1, 1};
  // quadrature-backed frames get the looser documented default
  double tol = G_text.empty() ? 1e-6 : 1e-9;
  bf_conditions* cond = nullptr;
  check(bf_check_construction(t, nullptr, box, points, seed, tol, &cond),
        "checking construction conditions");
  StringOut cond_text;
  check(bf_conditions_text(cond, &cond_text.s), "rendering conditions");
  std::cout << cond_text.str();
  bool ok = bf_conditions_all_pass(cond) && !sign_change;
  bf_conditions_free(cond);

  if (!out_path.empty()) {
    bf_spec* spec = nullptr;
    check(bf_spec_from_planar("planar", n, g_text.c_str(),
                              G_text.empty() ? nullptr : G_text.c_str(), &spec),
          "serializing planar spec");
    check(bf_spec_save(spec, out_path.c_str()), "writing '" + out_path + "'");
    bf_spec_free(spec);
    std::cout << "wrote " << out_path << "\n";
  }
  bf_triple_free(t);
  return ok ? 0 : 1;
}

int cmd_trace(const std::string& what, const std::string& x0_text, double t_end, double rtol,
              double atol, double max_step, int points, uint64_t seed,
              const std::string& out_path) {
  Source src = open_source(what);
  double x0[3];
  if (!parse_csv_doubles(x0_text, x0, 3)) {
    std::cerr << "error: --x0 needs three comma-separated numbers\n";
    return 2;
  }
  bf_field* w = field_of(src, src.box, points, seed);
  bf_streamline* s = nullptr;
  check(bf_trace(w, src.triple.get(), x0, t_end, rtol, atol, max_step, &s), "tracing streamline");

  size_t accepted = 0, rejected = 0;
  double max_err = 0.0;
  bf_streamline_stats(s, &accepted, &rejected, &max_err);
  std::cout << "steps accepted " << accepted << ", rejected " << rejected
            << ", max scaled error " << max_err << "\n";
  std::cout << "final time " << bf_streamline_t_final(s)
            << (bf_streamline_exited_domain(s) ? " (trajectory left the domain; truncated)"
                                               : "")
            << "\n";
  if (src.triple) {
    double dth = 0.0, dL = 0.0;
    bf_streamline_drift(s, &dth, &dL);
    std::cout << "invariant drift: theta " << dth << ", L_theta " << dL << "\n";
  }
  if (!out_path.empty()) {
    check(bf_streamline_write_csv(s, out_path.c_str()), "writing '" + out_path + "'");
    std::cout << "wrote " << out_path << "\n";
  } else {
    size_t len = bf_streamline_length(s);
    std::cout << "t,x,y,z,theta,L_theta\n";
    for (size_t i = 0; i < len; ++i) {
      double t, p[3], theta, L;
      bf_streamline_sample(s, i, &t, p, &theta, &L);
      std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, p[0], p[1], p[2], theta, L);
    }
  }
  bf_streamline_free(s);
  return 0;
}

int cmd_sample(const std::string& what, const std::string& box_text, const std::string& res_text,
               const std::string& extras_text, int points, uint64_t seed,
               const std::string& out_path) {
  Source src = open_source(what);
  double box[6];
  if (!box_text.empty()) {
    if (!parse_csv_doubles(box_text, box, 6)) {
      std::cerr << "error: --box needs xmin,xmax,ymin,ymax,zmin,zmax\n";
      return 2;
    }
  } else {
    for (int i = 0; i < 6; ++i) box[i] = src.box[i];
  }
  double res[3];
  if (!parse_csv_doubles(res_text, res, 3)) {
    std::cerr << "error: --res needs nx,ny,nz\n";
    return 2;
  }
  unsigned extras = 0;
  if (!extras_text.empty()) {
    std::istringstream in(extras_text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok == "hhat") extras |= BF_EXTRA_HHAT;
      else if (tok == "theta") extras |= BF_EXTRA_THETA;
      else if (tok == "L_theta") extras |= BF_EXTRA_L_THETA;
      else {
        std::cerr << "error: unknown extra '" << tok << "' (hhat, theta, L_theta)\n";
        return 2;
      }
    }
  }
  bf_field* w = field_of(src, box, points, seed);
  bf_grid* g = nullptr;
  check(bf_sample_grid(w, src.triple.get(), box, static_cast<int>(res[0]),
                       static_cast<int>(res[1]), static_cast<int>(res[2]), extras, &g),
        "sampling grid");
  std::cout << "nodes " << bf_grid_node_count(g) << ", masked " << bf_grid_masked_count(g)
            << "\n";
  std::filesystem::path out(out_path);
  if (out.extension() == ".vtk")
    check(bf_grid_write_vtk(g, out_path.c_str()), "writing '" + out_path + "'");
  else if (out.extension() == ".csv")
    check(bf_grid_write_csv(g, out_path.c_str()), "writing '" + out_path + "'");
  else {
    std::cerr << "error: --out must end in .vtk or .csv\n";
    bf_grid_free(g);
    return 2;
  }
  std::cout << "wrote " << out_path << "\n";
  bf_grid_free(g);
  return 0;
}

int cmd_catalog_list() {
  int n = bf_catalog_count();
  for (int i = 0; i < n; ++i) {
    const char* id = bf_catalog_id(i);
    StringOut desc;
    check(bf_catalog_get(id, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                         &desc.s, nullptr),
          "reading catalog entry");
    std::printf("%-8s %s\n", id, desc.str().c_str());
  }
  return 0;
}

int cmd_catalog_show(const std::string& id) {
  bf_field* f = nullptr;
  bf_triple* t = nullptr;
  StringOut hhat, div, desc, notes;
  double box[6];
  double seeds[15];
  int n_seeds = 0;
  check(bf_catalog_get(id.c_str(), &f, &t, &hhat.s, &div.s, box, seeds, &n_seeds, &desc.s,
                       &notes.s),
        "reading catalog entry");
  std::cout << id << ": " << desc.str() << "\n";
  for (int i = 0; i < 3; ++i) {
    bf_expr* comp = nullptr;
    check(bf_field_component(f, i, &comp), "reading component");
    StringOut text;
    check(bf_expr_to_string(comp, &text.s), "printing component");
    std::cout << "  w_" << "xyz"[i] << " = " << text.str() << "\n";
    bf_expr_free(comp);
  }
  if (t) {
    const char* names[3] = {"ell", "psi", "theta"};
    for (int i = 0; i < 3; ++i) {
      bf_expr* e = nullptr;
      check(bf_triple_coordinate(t, i, &e), "reading coordinate");
      StringOut text;
      check(bf_expr_to_string(e, &text.s), "printing coordinate");
      std::cout << "  " << names[i] << " = " << text.str() << "\n";
      bf_expr_free(e);
    }
    StringOut guard;
    check(bf_triple_guard(t, &guard.s), "reading guard");
    std::cout << "  guard: " << guard.str() << "\n";
  }
  std::cout << "  expected hhat = " << hhat.str() << "\n";
  std::cout << "  expected div  = " << div.str() << "\n";
  std::printf("  sample box [%g, %g] x [%g, %g] x [%g, %g]\n", box[0], box[1], box[2], box[3],
              box[4], box[5]);
  if (!notes.str().empty()) std::cout << "  notes: " << notes.str() << "\n";
  if (f) bf_field_free(f);
  if (t) bf_triple_free(t);
  return 0;
}

int cmd_catalog_verify_all(int points, uint64_t seed, double tol) {
  int n = bf_catalog_count();
  bool all_ok = true;
  for (int i = 0; i < n; ++i) {
    const char* id = bf_catalog_id(i);
    bf_field* f = nullptr;
    StringOut hhat, div;
    double box[6];
    check(bf_catalog_get(id, &f, nullptr, &hhat.s, &div.s, box, nullptr, nullptr, nullptr,
                         nullptr),
          "reading catalog entry");
    bf_report* rep = nullptr;
    check(bf_verify(f, box, points, seed, tol, hhat.s, div.s, &rep), "verifying entry");
    bool ok = bf_report_pass(rep);
    all_ok = all_ok && ok;
    std::printf("%-8s %-4s  alignment %.3e  hhat residual %.3e  div residual %.3e\n", id,
                ok ? "pass" : "FAIL", bf_report_alignment_residual(rep),
                bf_report_expected_hhat_residual(rep), bf_report_expected_div_residual(rep));
    bf_report_free(rep);
    bf_field_free(f);
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beltrami fields: construction, verification and flow tracing"};
  app.require_subcommand(1);
  uint64_t seed = default_seed();

  std::string what, box_text, out_path, x0_text, res_text, extras_text;
  std::string n_text, g_text, G_text, range_text;
  int points = 200;
  double tol = 1e-8;
  double construct_tol = 1e-9;
  bool star = false;
  double t_end = 10.0, rtol = 1e-10, atol = 1e-12, max_step = 0.5;

  auto* verify = app.add_subcommand("verify", "verify the Beltrami property of a field");
  verify->add_option("spec", what, "spec file or catalog id")->required();
  verify->add_option("--points", points, "sample count (default 200)");
  verify->add_option("--seed", seed, "sampling seed (BELTRAMI_SEED overrides the default)");
  verify->add_option("--box", box_text, "xmin,xmax,ymin,ymax,zmin,zmax");
  verify->add_option("--tol", tol, "pass tolerance (default 1e-8)");

  auto* construct = app.add_subcommand("construct", "build w (and w*) from a coordinate triple");
  construct->add_option("spec", what, "triple spec file or catalog id")->required();
  construct->add_flag("--star", star, "also emit the companion field w*");
  construct->add_option("--points", points, "sample count");
  construct->add_option("--seed", seed, "sampling seed");
  construct->add_option("--box", box_text, "xmin,xmax,ymin,ymax,zmin,zmax");
  construct->add_option("--tol", construct_tol,
                        "condition tolerance (default 1e-9 for symbolic triples)");
  construct->add_option("--out", out_path, "write the built field as a spec file");

  auto* planar = app.add_subcommand("planar", "planar eikonal frame from a 1D profile g(s)");
  planar->add_option("--n", n_text, "plane normal a,b,c (normalised internally)")->required();
  planar->add_option("--g", g_text, "profile g(s); |grad theta| = |g(n.x)|")->required();
  planar->add_option("--G", G_text, "closed-form antiderivative of g (else quadrature)");
  planar->add_option("--s-range", range_text, "working interval lo,hi (default -4,4)");
  planar->add_option("--points", points, "sample count for the condition check");
  planar->add_option("--seed", seed, "sampling seed");
  planar->add_option("--out", out_path, "write the frame as a planar_frame spec");

  auto* trace = app.add_subcommand("trace", "integrate a streamline of the field");
  trace->add_option("spec", what, "spec file or catalog id")->required();
  trace->add_option("--x0", x0_text, "seed point a,b,c")->required();
  trace->add_option("--t-end", t_end, "integration time")->required();
  trace->add_option("--rtol", rtol, "relative tolerance (default 1e-10)");
  trace->add_option("--atol", atol, "absolute tolerance (default 1e-12)");
  trace->add_option("--max-step", max_step, "maximum step (default 0.5)");
  trace->add_option("--points", points, "sigma sample count when constructing from a triple");
  trace->add_option("--seed", seed, "sampling seed");
  trace->add_option("--out", out_path, "CSV output path (default: stdout)");

  auto* sample = app.add_subcommand("sample", "sample the field on a regular grid");
  sample->add_option("spec", what, "spec file or catalog id")->required();
  sample->add_option("--box", box_text, "xmin,xmax,ymin,ymax,zmin,zmax");
  sample->add_option("--res", res_text, "nx,ny,nz (>= 2 each)")->required();
  sample->add_option("--extras", extras_text, "comma list of hhat,theta,L_theta");
  sample->add_option("--points", points, "sigma sample count when constructing from a triple");
  sample->add_option("--seed", seed, "sampling seed");
  sample->add_option("--out", out_path, "output path (.vtk or .csv)")->required();

  auto* catalog = app.add_subcommand("catalog", "built-in example fields");
  catalog->require_subcommand(1);
  auto* cat_list = catalog->add_subcommand("list", "list entries");
  auto* cat_show = catalog->add_subcommand("show", "print one entry");
  std::string show_id;
  cat_show->add_option("id", show_id, "entry id")->required();
  auto* cat_verify = catalog->add_subcommand("verify-all", "verify every entry");
  cat_verify->add_option("--points", points, "sample count");
  cat_verify->add_option("--seed", seed, "sampling seed");
  cat_verify->add_option("--tol", tol, "pass tolerance");

  CLI11_PARSE(app, argc, argv);

  if (*verify) return cmd_verify(what, points, seed, box_text, tol);
  if (*construct) return cmd_construct(what, star, points, seed, box_text, construct_tol, out_path);
  if (*planar) return cmd_planar(n_text, g_text, G_text, range_text, points, seed, out_path);
  if (*trace) return cmd_trace(what, x0_text, t_end, rtol, atol, max_step, points, seed, out_path);
  if (*sample) return cmd_sample(what, box_text, res_text, extras_text, points, seed, out_path);
  if (*cat_list) return cmd_catalog_list();
  if (*cat_show) return cmd_catalog_show(show_id);
  if (*cat_verify) return cmd_catalog_verify_all(points, seed, tol);
  return 2;
}
