#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "beltrami/fields.hpp"
#include "beltrami/flow.hpp"
#include "beltrami/frames.hpp"

namespace beltrami {

struct GridExtras {
  bool hhat = false;
  bool theta = false;    // requires a triple
  bool L_theta = false;  // requires a triple
};

/// Regular sample of a vector field on an axis-aligned box. Node order is
/// x fastest, then y, then z (VTK structured-points order). Guard-excluded
/// nodes are masked and carry NaN, never fabricated values.
struct GridSample {
  Box box;
  int nx = 0, ny = 0, nz = 0;
  std::vector<Vec3> values;
  std::vector<std::uint8_t> mask;  // 1 = valid node
  std::vector<std::pair<std::string, std::vector<double>>> extras;
  std::size_t masked_count = 0;

  std::size_t node_count() const { return static_cast<std::size_t>(nx) * ny * nz; }
  Vec3 spacing() const;
  Vec3 node_position(int i, int j, int k) const;
};

GridSample sample_grid(const VectorField& w, const Box& box, int nx, int ny, int nz,
                       const GridExtras& extras = {}, const OrthoTriple* triple = nullptr);

/// VTK legacy ASCII STRUCTURED_POINTS with one VECTORS field and one
/// SCALARS array per extra. Deterministic byte-for-byte (17 significant
/// digits throughout).
void write_vtk(const GridSample& g, const std::filesystem::path& path);

/// CSV with header x,y,z,wx,wy,wz[,extras...].
void write_csv(const GridSample& g, const std::filesystem::path& path);

/// CSV with header t,x,y,z,theta,L_theta (NaN columns when the trace has
/// no invariants attached).
void write_csv(const Streamline& s, const std::filesystem::path& path);
std::string streamline_csv(const Streamline& s);

}  // namespace beltrami
