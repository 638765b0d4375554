#include "beltrami/grid.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace beltrami {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Error::Code::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Error::Code::Io, "failed writing '" + path.string() + "'");
}

}  // namespace

Vec3 GridSample::spacing() const {
  return {nx > 1 ? (box.hi.x - box.lo.x) / (nx - 1) : 0.0,
          ny > 1 ? (box.hi.y - box.lo.y) / (ny - 1) : 0.0,
          nz > 1 ? (box.hi.z - box.lo.z) / (nz - 1) : 0.0};
}

Vec3 GridSample::node_position(int i, int j, int k) const {
  Vec3 d = spacing();
  return {box.lo.x + i * d.x, box.lo.y + j * d.y, box.lo.z + k * d.z};
}

GridSample sample_grid(const VectorField& w, const Box& box, int nx, int ny, int nz,
                       const GridExtras& extras, const OrthoTriple* triple) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw Error(Error::Code::InvalidArgument,
                "grid resolution must be at least 2 per axis, got " + std::to_string(nx) + "x" +
                    std::to_string(ny) + "x" + std::to_string(nz));
  if ((extras.theta || extras.L_theta) && !triple)
    throw Error(Error::Code::InvalidArgument,
                "theta / L_theta extras need a coordinate triple");

  GridSample g;
  g.box = box;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.values.assign(g.node_count(), Vec3{kNaN, kNaN, kNaN});
  g.mask.assign(g.node_count(), 0);

  std::vector<double>* hhat_col = nullptr;
  std::vector<double>* theta_col = nullptr;
  std::vector<double>* L_col = nullptr;
  g.extras.reserve(3);  // column pointers below must stay valid
  if (extras.hhat) {
    g.extras.emplace_back("hhat", std::vector<double>(g.node_count(), kNaN));
    hhat_col = &g.extras.back().second;
  }
  if (extras.theta) {
    g.extras.emplace_back("theta", std::vector<double>(g.node_count(), kNaN));
    theta_col = &g.extras.back().second;
  }
  if (extras.L_theta) {
    g.extras.emplace_back("L_theta", std::vector<double>(g.node_count(), kNaN));
    L_col = &g.extras.back().second;
  }

  VectorField curl_w = extras.hhat ? curl(w) : VectorField();
  Expr L_expr = triple ? triple->L_theta_expr() : Expr();

  std::size_t idx = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i, ++idx) {
        Vec3 p = g.node_position(i, j, k);
        bool ok = w.guard.admits(p) && (!triple || triple->guard().admits(p));
        if (ok) {
          try {
            Vec3 v = w.eval_unguarded(p);
            g.values[idx] = v;
            if (hhat_col) {
              double w2 = dot(v, v);
              (*hhat_col)[idx] =
                  w2 > 1e-24 ? dot(v, curl_w.eval_unguarded(p)) / w2 : kNaN;
            }
            if (theta_col) (*theta_col)[idx] = triple->theta.expr.eval(p);
            if (L_col) (*L_col)[idx] = L_expr.eval(p);
            g.mask[idx] = 1;
          } catch (const Error& e) {
            if (e.code() != Error::Code::Domain) throw;
            g.values[idx] = Vec3{kNaN, kNaN, kNaN};
            if (hhat_col) (*hhat_col)[idx] = kNaN;
            if (theta_col) (*theta_col)[idx] = kNaN;
            if (L_col) (*L_col)[idx] = kNaN;
            g.mask[idx] = 0;
          }
        }
        if (!g.mask[idx]) ++g.masked_count;
      }
    }
  }
  return g;
}

void write_vtk(const GridSample& g, const std::filesystem::path& path) {
  if (g.node_count() == 0)
    throw Error(Error::Code::InvalidArgument, "cannot write an empty grid sample");
  auto out = open_out(path);
  Vec3 d = g.spacing();
  out << "# vtk DataFile Version 3.0\n";
  out << "beltrami field sample\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx << " " << g.ny << " " << g.nz << "\n";
  out << "ORIGIN " << format_double(g.box.lo.x) << " " << format_double(g.box.lo.y) << " "
      << format_double(g.box.lo.z) << "\n";
  out << "SPACING " << format_double(d.x) << " " << format_double(d.y) << " "
      << format_double(d.z) << "\n";
  out << "POINT_DATA " << g.node_count() << "\n";
  out << "VECTORS w double\n";
  for (const Vec3& v : g.values)
    out << format_double(v.x) << " " << format_double(v.y) << " " << format_double(v.z) << "\n";
  for (const auto& [name, col] : g.extras) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : col) out << format_double(v) << "\n";
  }
  finish_out(out, path);
}

void write_csv(const GridSample& g, const std::filesystem::path& path) {
  if (g.node_count() == 0)
    throw Error(Error::Code::InvalidArgument, "cannot write an empty grid sample");
  auto out = open_out(path);
  out << "x,y,z,wx,wy,wz";
  for (const auto& [name, col] : g.extras) out << "," << name;
  out << "\n";
  std::size_t idx = 0;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i, ++idx) {
        Vec3 p = g.node_position(i, j, k);
        const Vec3& v = g.values[idx];
        out << format_double(p.x) << "," << format_double(p.y) << "," << format_double(p.z) << ","
            << format_double(v.x) << "," << format_double(v.y) << "," << format_double(v.z);
        for (const auto& [name, col] : g.extras) out << "," << format_double(col[idx]);
        out << "\n";
      }
    }
  }
  finish_out(out, path);
}

std::string streamline_csv(const Streamline& s) {
  std::ostringstream out;
  out << "t,x,y,z,theta,L_theta\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    double theta = s.has_invariants() ? s.theta_values[i] : kNaN;
    double L = s.has_invariants() ? s.L_theta_values[i] : kNaN;
    out << format_double(s.times[i]) << "," << format_double(s.points[i].x) << ","
        << format_double(s.points[i].y) << "," << format_double(s.points[i].z) << ","
        << format_double(theta) << "," << format_double(L) << "\n";
  }
  return out.str();
}

void write_csv(const Streamline& s, const std::filesystem::path& path) {
  if (s.times.empty())
    throw Error(Error::Code::InvalidArgument, "cannot write an empty streamline");
  auto out = open_out(path);
  out << streamline_csv(s);
  finish_out(out, path);
}

}  // namespace beltrami
