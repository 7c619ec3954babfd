#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "afc/mesh.hpp"

namespace afc {

// Text mesh format. Node file lines: `id x y [D|N]` (tag present on boundary
// vertices, D wins where Dirichlet and Neumann sides meet). Element file
// lines: `id v1 v2 v3`. Ids are 0-based. Coordinates use the shortest
// decimal representation that round-trips to the same double.
//
// A boundary side is read back as Dirichlet iff both endpoints carry D.
// Curved-boundary information is not stored.
void write_nodes(const Mesh& mesh, std::ostream& out);
void write_elements(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::filesystem::path& nodes,
                const std::filesystem::path& elements);

Mesh read_mesh(std::istream& nodes, std::istream& elements);
Mesh read_mesh(const std::filesystem::path& nodes, const std::filesystem::path& elements);

std::string format_double(double v);

}  // namespace afc
