#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/fields.hpp"
#include "beltrami/frames.hpp"

namespace beltrami {

/// One ground-truth field with its documented properties.
struct CatalogEntry {
  std::string id;
  std::string description;
  VectorField field;
  std::optional<OrthoTriple> triple;   // absent for ABC (no constructing triple)
  ScalarField expected_hhat;
  ScalarField expected_div;
  std::optional<Expr> theta_invariant;  // theta and L_theta, when a triple exists
  std::optional<Expr> L_invariant;
  Box sample_box;
  std::vector<Vec3> flow_seeds;  // guard-admitted, bounded through t ~ 20
  std::string notes;
};

/// ids: b0, ex1..ex8, abc, abc(A,B,C) with numeric parameters.
CatalogEntry get_example(std::string_view id);

/// The ids with default parameters (abc = abc(1,1,1)).
std::vector<std::string> catalog_ids();

}  // namespace beltrami
