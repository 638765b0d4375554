#include "beltrami/fieldspec.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace beltrami {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void schema_error(std::string_view origin, const std::string& what) {
  throw Error(Error::Code::Schema, std::string(origin) + ": " + what);
}

struct RawSpec {
  // section -> key -> (value, line)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> sections;
};

RawSpec read_key_values(std::string_view text, std::string_view origin) {
  RawSpec raw;
  std::string section = "spec";  // keys before any header land in [spec]
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw Error(Error::Code::Parse, std::string(origin) + ":" + std::to_string(lineno) +
                                            ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(Error::Code::Parse, std::string(origin) + ":" + std::to_string(lineno) +
                                          ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw Error(Error::Code::Parse,
                  std::string(origin) + ":" + std::to_string(lineno) + ": empty key");
    auto [it, inserted] = raw.sections[section].emplace(key, std::make_pair(value, lineno));
    if (!inserted)
      throw Error(Error::Code::Parse, std::string(origin) + ":" + std::to_string(lineno) +
                                          ": duplicate key '" + key + "'");
  }
  return raw;
}

Vec3 parse_vec3(const std::string& text, std::string_view origin) {
  std::istringstream in(text);
  std::string tok;
  double v[3];
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(in, tok, ','))
      schema_error(origin, "expected three comma-separated numbers, got '" + text + "'");
    try {
      v[i] = std::stod(trim(tok));
    } catch (const std::exception&) {
      schema_error(origin, "malformed number '" + trim(tok) + "' in '" + text + "'");
    }
  }
  if (std::getline(in, tok, ','))
    schema_error(origin, "expected exactly three numbers in '" + text + "'");
  return {v[0], v[1], v[2]};
}

void check_expr(const std::string& source, const std::string& key, std::string_view origin,
                bool profile = false) {
  try {
    if (profile)
      Expr::parse_profile(source);
    else
      Expr::parse(source);
  } catch (const Error& e) {
    schema_error(origin, "key '" + key + "': " + e.what());
  }
}

}  // namespace

const char* to_string(SpecKind k) {
  switch (k) {
    case SpecKind::VectorField: return "vector_field";
    case SpecKind::OrthoTriple: return "ortho_triple";
    case SpecKind::PlanarFrame: return "planar_frame";
  }
  return "?";
}

FieldSpec parse_field_spec(std::string_view text, std::string_view origin) {
  RawSpec raw = read_key_values(text, origin);
  for (const auto& [section, _] : raw.sections) {
    if (section != "spec" && section != "expected")
      schema_error(origin, "unknown section [" + section + "]");
  }
  auto& spec_keys = raw.sections["spec"];

  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = spec_keys.find(key);
    if (it == spec_keys.end()) return std::nullopt;
    std::string v = it->second.first;
    spec_keys.erase(it);
    return v;
  };

  FieldSpec spec;
  auto name = take("name");
  auto kind = take("kind");
  std::vector<std::string> missing;
  if (!name) missing.push_back("name");
  if (!kind) missing.push_back("kind");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    schema_error(origin, "missing required keys: " + list);
  }
  spec.name = *name;

  if (*kind == "vector_field")
    spec.kind = SpecKind::VectorField;
  else if (*kind == "ortho_triple")
    spec.kind = SpecKind::OrthoTriple;
  else if (*kind == "planar_frame")
    spec.kind = SpecKind::PlanarFrame;
  else
    schema_error(origin, "unknown kind '" + *kind +
                             "' (expected vector_field, ortho_triple or planar_frame)");

  if (auto g = take("guard")) {
    spec.guard_source = *g;
    try {
      Guard::parse(spec.guard_source);
    } catch (const Error& e) {
      schema_error(origin, std::string("guard: ") + e.what());
    }
  }

  auto require_all = [&](std::initializer_list<const char*> keys, std::string* out[]) {
    std::vector<std::string> absent;
    int i = 0;
    for (const char* k : keys) {
      if (auto v = take(k))
        *out[i] = *v;
      else
        absent.push_back(k);
      ++i;
    }
    if (!absent.empty()) {
      std::string list;
      for (const auto& m : absent) list += (list.empty() ? "" : ", ") + m;
      schema_error(origin,
                   std::string("kind ") + to_string(spec.kind) + " is missing keys: " + list);
    }
  };

  switch (spec.kind) {
    case SpecKind::VectorField: {
      std::string* out[3] = {&spec.components[0], &spec.components[1], &spec.components[2]};
      require_all({"w_x", "w_y", "w_z"}, out);
      check_expr(spec.components[0], "w_x", origin);
      check_expr(spec.components[1], "w_y", origin);
      check_expr(spec.components[2], "w_z", origin);
      break;
    }
    case SpecKind::OrthoTriple: {
      std::string* out[3] = {&spec.coordinates[0], &spec.coordinates[1], &spec.coordinates[2]};
      require_all({"ell", "psi", "theta"}, out);
      check_expr(spec.coordinates[0], "ell", origin);
      check_expr(spec.coordinates[1], "psi", origin);
      check_expr(spec.coordinates[2], "theta", origin);
      break;
    }
    case SpecKind::PlanarFrame: {
      std::string n_text, g_text;
      std::string* out[2] = {&n_text, &g_text};
      require_all({"n", "g"}, out);
      spec.normal = parse_vec3(n_text, origin);
      if (norm(spec.normal) == 0.0) schema_error(origin, "normal n must be nonzero");
      spec.g_source = g_text;
      check_expr(spec.g_source, "g", origin, /*profile=*/true);
      if (auto G = take("G")) {
        spec.G_source = *G;
        check_expr(*spec.G_source, "G", origin, /*profile=*/true);
      }
      break;
    }
  }

  if (!spec_keys.empty()) {
    auto it = spec_keys.begin();
    schema_error(origin, "unknown key '" + it->first + "' (line " +
                             std::to_string(it->second.second) + ") for kind " +
                             to_string(spec.kind));
  }

  auto& expected = raw.sections["expected"];
  auto take_expected = [&](const char* key) -> std::optional<std::string> {
    auto it = expected.find(key);
    if (it == expected.end()) return std::nullopt;
    std::string v = it->second.first;
    expected.erase(it);
    return v;
  };
  if (auto h = take_expected("hhat")) {
    check_expr(*h, "expected hhat", origin);
    spec.expected_hhat = *h;
  }
  if (auto d = take_expected("div")) {
    check_expr(*d, "expected div", origin);
    spec.expected_div = *d;
  }
  if (!expected.empty())
    schema_error(origin, "unknown key '" + expected.begin()->first + "' in [expected]");

  return spec;
}

FieldSpec load_field_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Code::Io, "cannot open spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_field_spec(buf.str(), path.string());
}

std::string serialize_field_spec(const FieldSpec& spec) {
  std::ostringstream os;
  os << "[spec]\n";
  os << "name = " << spec.name << "\n";
  os << "kind = " << to_string(spec.kind) << "\n";
  switch (spec.kind) {
    case SpecKind::VectorField:
      os << "w_x = " << spec.components[0] << "\n";
      os << "w_y = " << spec.components[1] << "\n";
      os << "w_z = " << spec.components[2] << "\n";
      break;
    case SpecKind::OrthoTriple:
      os << "ell = " << spec.coordinates[0] << "\n";
      os << "psi = " << spec.coordinates[1] << "\n";
      os << "theta = " << spec.coordinates[2] << "\n";
      break;
    case SpecKind::PlanarFrame:
      os << "n = " << format_double(spec.normal.x) << ", " << format_double(spec.normal.y) << ", "
         << format_double(spec.normal.z) << "\n";
      os << "g = " << spec.g_source << "\n";
      if (spec.G_source) os << "G = " << *spec.G_source << "\n";
      break;
  }
  os << "guard = " << spec.guard_source << "\n";
  if (spec.expected_hhat || spec.expected_div) {
    os << "\n[expected]\n";
    if (spec.expected_hhat) os << "hhat = " << *spec.expected_hhat << "\n";
    if (spec.expected_div) os << "div = " << *spec.expected_div << "\n";
  }
  return os.str();
}

void save_field_spec(const FieldSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(Error::Code::Io, "cannot write spec file '" + path.string() + "'");
  out << serialize_field_spec(spec);
  if (!out)
    throw Error(Error::Code::Io, "failed writing spec file '" + path.string() + "'");
}

VectorField FieldSpec::make_vector_field() const {
  if (kind != SpecKind::VectorField)
    throw Error(Error::Code::InvalidArgument,
                "spec '" + name + "' has kind " + to_string(kind) + ", not vector_field");
  Guard guard = Guard::parse(guard_source);
  return VectorField(Expr::parse(components[0]), Expr::parse(components[1]),
                     Expr::parse(components[2]), guard);
}

OrthoTriple FieldSpec::make_triple() const {
  if (kind == SpecKind::OrthoTriple) {
    Guard guard = Guard::parse(guard_source);
    OrthoTriple t;
    t.ell = ScalarField(Expr::parse(coordinates[0]), guard);
    t.psi = ScalarField(Expr::parse(coordinates[1]), guard);
    t.theta = ScalarField(Expr::parse(coordinates[2]), guard);
    return t;
  }
  if (kind == SpecKind::PlanarFrame) {
    Expr g = Expr::parse_profile(g_source);
    std::optional<Expr> G;
    if (G_source) G = Expr::parse_profile(*G_source);
    return planar_frame(normalized(normal), g, G).triple;
  }
  throw Error(Error::Code::InvalidArgument,
              "spec '" + name + "' has kind vector_field; no coordinate triple to build");
}

std::optional<ScalarField> FieldSpec::expected_hhat_field() const {
  if (!expected_hhat) return std::nullopt;
  return ScalarField(Expr::parse(*expected_hhat), Guard::parse(guard_source));
}

std::optional<ScalarField> FieldSpec::expected_div_field() const {
  if (!expected_div) return std::nullopt;
  return ScalarField(Expr::parse(*expected_div), Guard::parse(guard_source));
}

FieldSpec spec_from_vector_field(std::string name, const VectorField& w) {
  if (w.x.has_external() || w.y.has_external() || w.z.has_external())
    throw Error(Error::Code::InvalidArgument,
                "field contains numeric (quadrature-backed) parts; save the generating "
                "planar_frame spec instead");
  FieldSpec spec;
  spec.name = std::move(name);
  spec.kind = SpecKind::VectorField;
  spec.components = {w.x.str(), w.y.str(), w.z.str()};
  spec.guard_source = w.guard.source();
  return spec;
}

FieldSpec spec_from_triple(std::string name, const OrthoTriple& t) {
  if (t.ell.expr.has_external() || t.psi.expr.has_external() || t.theta.expr.has_external())
    throw Error(Error::Code::InvalidArgument,
                "triple contains numeric (quadrature-backed) coordinates; save the generating "
                "planar_frame spec instead");
  FieldSpec spec;
  spec.name = std::move(name);
  spec.kind = SpecKind::OrthoTriple;
  spec.coordinates = {t.ell.expr.str(), t.psi.expr.str(), t.theta.expr.str()};
  spec.guard_source = t.guard().source();
  return spec;
}

}  // namespace beltrami
