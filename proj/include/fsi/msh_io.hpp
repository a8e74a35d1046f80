#pragma once

#include <optional>
#include <string>

#include "fsi/mesh.hpp"

namespace fsi {

/// Read a Gmsh MSH 2.2 ASCII file. Triangles (element type 2) must carry
/// physical tag 1 (elastic) or 2 (fluid); other element types are skipped.
/// Optional circle radii attach exact-boundary metadata for refinement.
Mesh import_msh(const std::string& path, std::optional<double> interface_radius = std::nullopt,
                std::optional<double> artificial_radius = std::nullopt);

/// Write the mesh in the same MSH 2.2 ASCII dialect.
void export_msh(const Mesh& mesh, const std::string& path);

}  // namespace fsi
