#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "afc/geometry.hpp"

namespace afc {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryTag : std::uint8_t { None, Dirichlet, Neumann };

enum class CellOrigin : std::uint8_t { Root, Red, Green };

// Boundary classification of one side of a triangle.
struct SideInfo {
  BoundaryTag tag = BoundaryTag::None;
  int curve = -1;  // index into Mesh::curves(), -1 for straight sides

  friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

struct Genealogy {
  CellOrigin origin = CellOrigin::Root;
  int generation = 0;
  // Green cells only: the regular triangle that was bisected to close the
  // mesh, stored by vertex ids (counterclockwise) together with its own
  // origin so that it can be restored without a cell hierarchy.
  std::array<int, 3> parent{-1, -1, -1};
  CellOrigin parent_origin = CellOrigin::Root;
  int parent_generation = 0;
};

struct Edge {
  std::array<int, 2> v{};          // v[0] < v[1]
  std::array<int, 2> cells{-1, -1};  // cells[0] < cells[1]; cells[1] = -1 on the boundary
  SideInfo side;

  bool boundary() const { return cells[1] < 0; }
};

struct CellGeometry {
  double area = 0.0;
  double diameter = 0.0;  // h_K, longest side
  double inscribed_diameter = 0.0;  // rho_K
  std::array<double, 3> angles{};  // interior angle at each vertex
  std::array<Vec2, 3> grad{};  // gradients of the barycentric functions
};

using Triangle = std::array<int, 3>;

// Classifies a boundary side given its endpoints.
struct BoundarySpec {
  std::function<BoundaryTag(Point2, Point2)> tag;
  // Optional: returns the curve index of a side, or -1 when it is straight.
  std::function<int(Point2, Point2)> curve;
  std::vector<Circle> curves;
};

class Mesh {
 public:
  Mesh() = default;

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Genealogy>& genealogy() const { return genealogy_; }
  const std::vector<Circle>& curves() const { return curves_; }

  Point2 vertex(int v) const { return vertices_[v]; }
  const Triangle& cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }
  // Edge opposite local vertex k of cell c.
  int cell_edge(int c, int k) const { return cell_edges_[c][k]; }
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }

  std::span<const int> vertex_cells(int v) const;
  std::span<const int> vertex_neighbors(int v) const;
  std::optional<int> find_edge(int a, int b) const;
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }

  // For vertices created by refinement, the edge whose midpoint they are;
  // {-1, -1} for root vertices.
  const std::array<int, 2>& vertex_parent(int v) const { return vertex_parents_[v]; }
  const std::unordered_map<std::uint64_t, int>& midpoint_registry() const { return midpoints_; }

  CellGeometry cell_geometry(int c) const;
  double cell_area(int c) const;
  Point2 barycenter(int c) const;
  double total_area() const;
  double min_angle() const;
  SideInfo side_info(int c, int k) const { return edges_[cell_edges_[c][k]].side; }

  static std::uint64_t edge_key(int a, int b);

  // Low-level constructor used by build_mesh, refinement and the readers.
  // Sides are described per cell (side k is opposite local vertex k).
  static Mesh assemble(std::vector<Point2> vertices, std::vector<Triangle> cells,
                       const std::vector<std::array<SideInfo, 3>>& sides,
                       std::vector<Genealogy> genealogy, std::vector<Circle> curves,
                       std::unordered_map<std::uint64_t, int> midpoints,
                       std::vector<std::array<int, 2>> vertex_parents);

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> cells_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<Edge> edges_;
  std::vector<Genealogy> genealogy_;
  std::vector<Circle> curves_;
  std::unordered_map<std::uint64_t, int> midpoints_;
  std::vector<std::array<int, 2>> vertex_parents_;
  std::vector<std::uint8_t> boundary_vertex_;
  // CSR adjacency
  std::vector<int> vc_offset_, vc_index_;
  std::vector<int> vn_offset_, vn_index_;
  std::vector<int> ve_offset_, ve_index_;
};

Mesh build_mesh(const std::vector<Point2>& points, std::vector<Triangle> triangles,
                const BoundarySpec& boundary);

// Red refinement of the marked cells with closure. Closure cells are
// removed (and their parents restored) before refinement; a marked closure
// cell marks its parent. A cell with one hanging side is bisected when that
// side is its longest; otherwise its longest side is split too and the cell
// is cut into three (two bisections). Cells with three hanging sides, or two
// that do not include the longest, are red-refined. All closure cells carry
// CellOrigin::Green.
Mesh refine_red_green(const Mesh& mesh, std::span<const int> marked);
Mesh refine_uniform(const Mesh& mesh);

// Radially projects every vertex lying on a side attached to `curve` onto
// the circle mesh.curves()[curve].
Mesh project_curved_boundary(const Mesh& mesh, int curve);

// Bucket-grid point location over a fixed mesh.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  // Lowest-id cell whose closed triangle contains p.
  std::optional<int> locate(Point2 p) const;

 private:
  const Mesh* mesh_;
  Point2 lo_, hi_;
  int nx_ = 1, ny_ = 1;
  double dx_ = 1.0, dy_ = 1.0;
  std::vector<int> offset_, index_;
};

std::optional<int> locate_point(const Mesh& mesh, Point2 p);

// Among the cells incident to vertex i, the one whose angular sector at x_i
// contains the direction (lowest id on ties).
std::optional<int> ray_first_cell(const Mesh& mesh, int i, Vec2 direction);

// Vertices lying in the relative interior of some edge (T-junctions).
std::vector<int> hanging_vertices(const Mesh& mesh);

}  // namespace afc
