#pragma once

#include <filesystem>
#include <optional>

#include "sispec/mesh.hpp"

namespace sispec {

enum class MeshFormat { OFF, PLY_ASCII, OBJ };

/// Infers the format from the file extension (.off/.ply/.obj).
MeshFormat infer_format(const std::filesystem::path& path);

/// Loads a triangle mesh; vertex order is preserved from the file.
/// Throws ParseError (with line number) or UnsupportedFormat.
TriMesh load_mesh(const std::filesystem::path& path,
                  std::optional<MeshFormat> format = std::nullopt);

/// Writes OFF with 17 significant digits so positions round-trip exactly.
void write_off(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace sispec
