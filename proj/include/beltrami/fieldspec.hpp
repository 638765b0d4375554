#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "beltrami/fields.hpp"
#include "beltrami/frames.hpp"

namespace beltrami {

enum class SpecKind { VectorField, OrthoTriple, PlanarFrame };

const char* to_string(SpecKind k);

/// Hand-editable field description. Flat key-value text with two
/// sections, [spec] and an optional [expected]; see README for the schema.
struct FieldSpec {
  std::string name;
  SpecKind kind = SpecKind::VectorField;
  std::string guard_source = "none";

  // kind == VectorField
  std::array<std::string, 3> components;  // w_x, w_y, w_z

  // kind == OrthoTriple
  std::array<std::string, 3> coordinates;  // ell, psi, theta

  // kind == PlanarFrame
  Vec3 normal{0, 0, 1};
  std::string g_source;
  std::optional<std::string> G_source;

  std::optional<std::string> expected_hhat;
  std::optional<std::string> expected_div;

  /// Builds the vector field (VectorField kind only).
  VectorField make_vector_field() const;

  /// Builds the coordinate triple (OrthoTriple or PlanarFrame kind).
  OrthoTriple make_triple() const;

  std::optional<ScalarField> expected_hhat_field() const;
  std::optional<ScalarField> expected_div_field() const;
};

FieldSpec parse_field_spec(std::string_view text, std::string_view origin = "<string>");
FieldSpec load_field_spec(const std::filesystem::path& path);

std::string serialize_field_spec(const FieldSpec& spec);
void save_field_spec(const FieldSpec& spec, const std::filesystem::path& path);

FieldSpec spec_from_vector_field(std::string name, const VectorField& w);
FieldSpec spec_from_triple(std::string name, const OrthoTriple& t);

}  // namespace beltrami
