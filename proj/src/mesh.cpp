#include "afc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace afc {

namespace {

void build_csr(std::size_t n, const std::vector<std::vector<int>>& lists, std::vector<int>& offset,
               std::vector<int>& index) {
  offset.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + static_cast<int>(lists[i].size());
  index.clear();
  index.reserve(offset[n]);
  for (const auto& l : lists) index.insert(index.end(), l.begin(), l.end());
}

std::string describe(Point2 p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

std::uint64_t Mesh::edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

Mesh Mesh::assemble(std::vector<Point2> vertices, std::vector<Triangle> cells,
                    const std::vector<std::array<SideInfo, 3>>& sides,
                    std::vector<Genealogy> genealogy, std::vector<Circle> curves,
                    std::unordered_map<std::uint64_t, int> midpoints,
                    std::vector<std::array<int, 2>> vertex_parents) {
  Mesh m;
  const int nv = static_cast<int>(vertices.size());
  const int nc = static_cast<int>(cells.size());
  if (genealogy.empty()) genealogy.resize(nc);
  if (vertex_parents.empty()) vertex_parents.assign(nv, {-1, -1});
  if (static_cast<int>(sides.size()) != nc || static_cast<int>(genealogy.size()) != nc ||
      static_cast<int>(vertex_parents.size()) != nv) {
    throw MeshError("mesh assembly: inconsistent array sizes");
  }

  for (int c = 0; c < nc; ++c) {
    const auto& t = cells[c];
    for (int v : t) {
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references invalid vertex");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("cell " + std::to_string(c) + " has repeated vertices");
    }
    if (!(orient2d(vertices[t[0]], vertices[t[1]], vertices[t[2]]) > 0.0)) {
      throw MeshError("cell " + std::to_string(c) + " has non-positive area");
    }
  }

  std::unordered_map<std::uint64_t, int> edge_of;
  edge_of.reserve(static_cast<std::size_t>(nc) * 2);
  std::vector<int> first_tail;  // tail vertex of the edge as traversed by cells[0]
  m.cell_edges_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = cells[c][(k + 1) % 3];
      const int b = cells[c][(k + 2) % 3];
      const auto key = edge_key(a, b);
      auto [it, inserted] = edge_of.try_emplace(key, static_cast<int>(m.edges_.size()));
      if (inserted) {
        Edge e;
        e.v = {std::min(a, b), std::max(a, b)};
        e.cells = {c, -1};
        e.side = sides[c][k];
        m.edges_.push_back(e);
        first_tail.push_back(a);
      } else {
        Edge& e = m.edges_[it->second];
        if (e.cells[1] >= 0) {
          throw MeshError("non-conforming input: edge " + describe(vertices[a]) + "-" +
                          describe(vertices[b]) + " shared by more than two cells");
        }
        if (first_tail[it->second] == a) {
          throw MeshError("overlapping cells " + std::to_string(e.cells[0]) + " and " +
                          std::to_string(c));
        }
        e.cells[1] = c;
        e.side = SideInfo{};
      }
      m.cell_edges_[c][k] = it->second;
    }
  }
  for (const Edge& e : m.edges_) {
    if (e.boundary() && e.side.tag == BoundaryTag::None) {
      throw MeshError("untagged boundary edge " + describe(vertices[e.v[0]]) + "-" +
                      describe(vertices[e.v[1]]));
    }
  }

  std::vector<std::vector<int>> vc(nv), vn(nv), ve(nv);
  for (int c = 0; c < nc; ++c) {
    for (int v : cells[c]) vc[v].push_back(c);
  }
  m.boundary_vertex_.assign(nv, 0);
  for (int e = 0; e < static_cast<int>(m.edges_.size()); ++e) {
    const auto& ed = m.edges_[e];
    vn[ed.v[0]].push_back(ed.v[1]);
    vn[ed.v[1]].push_back(ed.v[0]);
    ve[ed.v[0]].push_back(e);
    ve[ed.v[1]].push_back(e);
    if (ed.boundary()) m.boundary_vertex_[ed.v[0]] = m.boundary_vertex_[ed.v[1]] = 1;
  }
  for (auto& l : vn) std::sort(l.begin(), l.end());
  build_csr(nv, vc, m.vc_offset_, m.vc_index_);
  build_csr(nv, vn, m.vn_offset_, m.vn_index_);
  build_csr(nv, ve, m.ve_offset_, m.ve_index_);

  m.vertices_ = std::move(vertices);
  m.cells_ = std::move(cells);
  m.genealogy_ = std::move(genealogy);
  m.curves_ = std::move(curves);
  m.midpoints_ = std::move(midpoints);
  m.vertex_parents_ = std::move(vertex_parents);
  return m;
}

std::span<const int> Mesh::vertex_cells(int v) const {
  return {vc_index_.data() + vc_offset_[v], static_cast<std::size_t>(vc_offset_[v + 1] - vc_offset_[v])};
}

std::span<const int> Mesh::vertex_neighbors(int v) const {
  return {vn_index_.data() + vn_offset_[v], static_cast<std::size_t>(vn_offset_[v + 1] - vn_offset_[v])};
}

std::optional<int> Mesh::find_edge(int a, int b) const {
  if (a < 0 || b < 0 || a >= static_cast<int>(vertices_.size()) || b >= static_cast<int>(vertices_.size()))
    return std::nullopt;
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (int k = ve_offset_[a]; k < ve_offset_[a + 1]; ++k) {
    const Edge& e = edges_[ve_index_[k]];
    if (e.v[0] == lo && e.v[1] == hi) return ve_index_[k];
  }
  return std::nullopt;
}

CellGeometry Mesh::cell_geometry(int c) const {
  CellGeometry g;
  const auto& t = cells_[c];
  const std::array<Point2, 3> p{vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  const double det = orient2d(p[0], p[1], p[2]);
  g.area = 0.5 * det;
  double perimeter = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Point2 a = p[(k + 1) % 3];
    const Point2 b = p[(k + 2) % 3];
    const double len = norm(b - a);
    perimeter += len;
    g.diameter = std::max(g.diameter, len);
    g.grad[k] = {(a.y - b.y) / det, (b.x - a.x) / det};
    const Vec2 u = a - p[k];
    const Vec2 w = b - p[k];
    g.angles[k] = std::atan2(std::abs(cross(u, w)), dot(u, w));
  }
  g.inscribed_diameter = 4.0 * g.area / perimeter;
  return g;
}

double Mesh::cell_area(int c) const {
  const auto& t = cells_[c];
  return 0.5 * orient2d(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

Point2 Mesh::barycenter(int c) const {
  const auto& t = cells_[c];
  const Point2 s = vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]];
  return (1.0 / 3.0) * s;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) a += cell_area(c);
  return a;
}

double Mesh::min_angle() const {
  double m = std::numbers::pi;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    for (double a : cell_geometry(c).angles) m = std::min(m, a);
  }
  return m;
}

Mesh build_mesh(const std::vector<Point2>& points, std::vector<Triangle> triangles,
                const BoundarySpec& boundary) {
  const int nv = static_cast<int>(points.size());
  for (std::size_t c = 0; c < triangles.size(); ++c) {
    auto& t = triangles[c];
    for (int v : t) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(c) + " references invalid point");
    }
    const double o = orient2d(points[t[0]], points[t[1]], points[t[2]]);
    if (o == 0.0) throw MeshError("triangle " + std::to_string(c) + " has zero area");
    if (o < 0.0) std::swap(t[1], t[2]);
  }

  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) ++count[Mesh::edge_key(t[(k + 1) % 3], t[(k + 2) % 3])];
  }
  std::vector<std::array<SideInfo, 3>> sides(triangles.size());
  for (std::size_t c = 0; c < triangles.size(); ++c) {
    const auto& t = triangles[c];
    for (int k = 0; k < 3; ++k) {
      const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      if (count[Mesh::edge_key(a, b)] != 1) continue;
      SideInfo s;
      if (boundary.tag) s.tag = boundary.tag(points[a], points[b]);
      if (boundary.curve) s.curve = boundary.curve(points[a], points[b]);
      sides[c][k] = s;
    }
  }
  return Mesh::assemble(points, std::move(triangles), sides, {}, boundary.curves, {}, {});
}

// ---------------------------------------------------------------------------
// Red-green refinement

namespace {

struct Leaf {
  Triangle v;
  Genealogy g;
  std::array<SideInfo, 3> side;
  bool alive = true;
};

class Refiner {
 public:
  explicit Refiner(const Mesh& mesh)
      : vertices_(mesh.vertices()),
        curves_(mesh.curves()),
        midpoints_(mesh.midpoint_registry()),
        parents_(mesh.num_vertices()) {
    for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) parents_[v] = mesh.vertex_parent(v);
  }

  std::optional<int> split_point(int a, int b) const {
    auto it = midpoints_.find(Mesh::edge_key(a, b));
    if (it == midpoints_.end()) return std::nullopt;
    return it->second;
  }

  int midpoint_of(int a, int b, const SideInfo& side) {
    const auto key = Mesh::edge_key(a, b);
    if (auto it = midpoints_.find(key); it != midpoints_.end()) return it->second;
    Point2 m = midpoint(vertices_[a], vertices_[b]);
    if (side.curve >= 0) {
      const Circle& circle = curves_.at(side.curve);
      const Vec2 r = m - circle.center;
      const double len = norm(r);
      if (len == 0.0) throw MeshError("curved boundary projection: midpoint at circle center");
      m = circle.center + (circle.radius / len) * r;
    }
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back(m);
    parents_.push_back({std::min(a, b), std::max(a, b)});
    midpoints_.emplace(key, id);
    return id;
  }

  // Replaces leaves[i] by its four red children.
  void red(std::vector<Leaf>& leaves, std::size_t i) {
    const Leaf parent = leaves[i];
    leaves[i].alive = false;
    const auto& v = parent.v;
    const auto& e = parent.side;
    const int m0 = midpoint_of(v[1], v[2], e[0]);
    const int m1 = midpoint_of(v[2], v[0], e[1]);
    const int m2 = midpoint_of(v[0], v[1], e[2]);
    Genealogy g;
    g.origin = CellOrigin::Red;
    g.generation = parent.g.generation + 1;
    const SideInfo in{};
    leaves.push_back({{v[0], m2, m1}, g, {in, e[1], e[2]}});
    leaves.push_back({{m2, v[1], m0}, g, {e[0], in, e[2]}});
    leaves.push_back({{m1, m0, v[2]}, g, {e[0], e[1], in}});
    leaves.push_back({{m0, m1, m2}, g, {in, in, in}});
  }

  // Number of split sides of a leaf, and whether any split side has a split half.
  std::pair<int, bool> hanging(const Leaf& leaf) const {
    int count = 0;
    bool deep = false;
    for (int k = 0; k < 3; ++k) {
      const int a = leaf.v[(k + 1) % 3], b = leaf.v[(k + 2) % 3];
      if (auto m = split_point(a, b)) {
        ++count;
        if (split_point(a, *m) || split_point(*m, b)) deep = true;
      }
    }
    return {count, deep};
  }

  // Local index of the longest side; among (nearly) equal longest sides a
  // split one is preferred.
  int longest_side(const Leaf& leaf) const {
    std::array<double, 3> len2{};
    double top = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 d = vertices_[leaf.v[(k + 2) % 3]] - vertices_[leaf.v[(k + 1) % 3]];
      len2[k] = dot(d, d);
      top = std::max(top, len2[k]);
    }
    int best = -1;
    for (int k = 0; k < 3; ++k) {
      if (len2[k] < top * (1.0 - 1e-12)) continue;
      if (best < 0) best = k;
      if (split_point(leaf.v[(k + 1) % 3], leaf.v[(k + 2) % 3])) return k;
    }
    return best;
  }

  bool side_split(const Leaf& leaf, int k) const {
    return split_point(leaf.v[(k + 1) % 3], leaf.v[(k + 2) % 3]).has_value();
  }

  std::vector<Point2> vertices_;
  std::vector<Circle> curves_;
  std::unordered_map<std::uint64_t, int> midpoints_;
  std::vector<std::array<int, 2>> parents_;
};

}  // namespace

Mesh refine_red_green(const Mesh& mesh, std::span<const int> marked) {
  const int nc = static_cast<int>(mesh.num_cells());
  std::vector<char> is_marked(nc, 0);
  for (int c : marked) {
    if (c < 0 || c >= nc) throw MeshError("refine_red_green: marked cell out of range");
    is_marked[c] = 1;
  }

  // Steps 1 and 2: replace green pairs by their regular parents, which
  // inherit the marks of their children.
  std::vector<Leaf> leaves;
  std::vector<char> leaf_marked;
  leaves.reserve(nc * 2);
  std::map<Triangle, std::size_t> restored;
  for (int c = 0; c < nc; ++c) {
    const Genealogy& g = mesh.genealogy()[c];
    if (g.origin != CellOrigin::Green) {
      leaves.push_back({mesh.cell(c), g, {mesh.side_info(c, 0), mesh.side_info(c, 1), mesh.side_info(c, 2)}});
      leaf_marked.push_back(is_marked[c]);
      continue;
    }
    Triangle key = g.parent;
    std::sort(key.begin(), key.end());
    auto [it, inserted] = restored.try_emplace(key, leaves.size());
    const std::size_t found = it->second;
    if (inserted) {
      Leaf p;
      p.v = g.parent;
      p.g.origin = g.parent_origin;
      p.g.generation = g.parent_generation;
      for (int k = 0; k < 3; ++k) {
        const int a = p.v[(k + 1) % 3], b = p.v[(k + 2) % 3];
        auto e = mesh.find_edge(a, b);
        // The bisected side only survives as two halves.
        if (!e) {
          if (auto m = mesh.midpoint_registry().find(Mesh::edge_key(a, b)); m != mesh.midpoint_registry().end())
            e = mesh.find_edge(a, m->second);
        }
        if (e) p.side[k] = mesh.edge(*e).side;
      }
      leaves.push_back(p);
      leaf_marked.push_back(0);
    }
    if (is_marked[c]) leaf_marked[found] = 1;
  }

  // Step 3: red refinement of marked cells, then closure.
  Refiner refiner(mesh);
  const std::size_t initial = leaves.size();
  for (std::size_t i = 0; i < initial; ++i) {
    if (leaf_marked[i]) refiner.red(leaves, i);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (!leaves[i].alive) continue;
      const auto [count, deep] = refiner.hanging(leaves[i]);
      if (count == 0) continue;
      const int longest = refiner.longest_side(leaves[i]);
      const bool longest_split = refiner.side_split(leaves[i], longest);
      if (count == 3 || deep || (count == 2 && !longest_split)) {
        refiner.red(leaves, i);
        changed = true;
      } else if (!longest_split) {
        // Closing a short side directly would cut the cell into slivers;
        // split the longest side as well and close with two bisections.
        const Leaf& leaf = leaves[i];
        refiner.midpoint_of(leaf.v[(longest + 1) % 3], leaf.v[(longest + 2) % 3], leaf.side[longest]);
        changed = true;
      }
    }
  }

  std::vector<Triangle> cells;
  std::vector<std::array<SideInfo, 3>> sides;
  std::vector<Genealogy> genealogy;
  cells.reserve(leaves.size());
  struct Piece {
    Triangle v;
    std::array<SideInfo, 3> side;
  };
  // Bisects side k of a piece towards the opposite vertex.
  auto bisect = [](const Piece& p, int k, int m) {
    const int top = p.v[k], a = p.v[(k + 1) % 3], b = p.v[(k + 2) % 3];
    const SideInfo in{};
    return std::array<Piece, 2>{Piece{{top, a, m}, {p.side[k], in, p.side[(k + 2) % 3]}},
                                Piece{{top, m, b}, {p.side[k], p.side[(k + 1) % 3], in}}};
  };
  for (const Leaf& leaf : leaves) {
    if (!leaf.alive) continue;
    if (refiner.hanging(leaf).first == 0) {
      cells.push_back(leaf.v);
      sides.push_back(leaf.side);
      genealogy.push_back(leaf.g);
      continue;
    }
    Genealogy g;
    g.origin = CellOrigin::Green;
    g.generation = leaf.g.generation + 1;
    g.parent = leaf.v;
    g.parent_origin = leaf.g.origin;
    g.parent_generation = leaf.g.generation;
    // The longest side is always split here; a second split side (blue
    // closure) ends up in exactly one of the two halves.
    const int k = refiner.longest_side(leaf);
    const int m = *refiner.split_point(leaf.v[(k + 1) % 3], leaf.v[(k + 2) % 3]);
    std::vector<Piece> pieces;
    for (const Piece& half : bisect(Piece{leaf.v, leaf.side}, k, m)) {
      bool done = false;
      for (int j = 0; j < 3 && !done; ++j) {
        const int a = half.v[(j + 1) % 3], b = half.v[(j + 2) % 3];
        if (a == m || b == m) continue;
        if (auto q = refiner.split_point(a, b)) {
          for (const Piece& quarter : bisect(half, j, *q)) pieces.push_back(quarter);
          done = true;
        }
      }
      if (!done) pieces.push_back(half);
    }
    for (const Piece& p : pieces) {
      cells.push_back(p.v);
      sides.push_back(p.side);
      genealogy.push_back(g);
    }
  }

  return Mesh::assemble(std::move(refiner.vertices_), std::move(cells), sides, std::move(genealogy),
                        mesh.curves(), std::move(refiner.midpoints_), std::move(refiner.parents_));
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<int> all(mesh.num_cells());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = static_cast<int>(c);
  return refine_red_green(mesh, all);
}

Mesh project_curved_boundary(const Mesh& mesh, int curve) {
  const Circle& circle = mesh.curves().at(curve);
  std::vector<Point2> vertices = mesh.vertices();
  for (const Edge& e : mesh.edges()) {
    if (e.side.curve != curve) continue;
    for (int v : e.v) {
      const Vec2 r = mesh.vertex(v) - circle.center;
      const double len = norm(r);
      if (len == 0.0) throw MeshError("curved boundary projection: vertex at circle center");
      vertices[v] = circle.center + (circle.radius / len) * r;
    }
  }
  std::vector<std::array<SideInfo, 3>> sides(mesh.num_cells());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    for (int k = 0; k < 3; ++k) sides[c][k] = mesh.side_info(c, k);
  }
  std::vector<std::array<int, 2>> parents(mesh.num_vertices());
  for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) parents[v] = mesh.vertex_parent(v);
  return Mesh::assemble(std::move(vertices), mesh.cells(), sides, mesh.genealogy(), mesh.curves(),
                        mesh.midpoint_registry(), std::move(parents));
}

// ---------------------------------------------------------------------------
// Point location

namespace {
constexpr double kBaryTol = 1e-12;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  const auto& vs = mesh.vertices();
  lo_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  hi_ = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& p : vs) {
    lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
    hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
  }
  const double w = std::max(hi_.x - lo_.x, 1e-300);
  const double h = std::max(hi_.y - lo_.y, 1e-300);
  const double n = std::max<double>(1.0, static_cast<double>(mesh.num_cells()));
  const double cell = std::sqrt(w * h / n);
  nx_ = std::clamp(static_cast<int>(std::ceil(w / cell)), 1, 4096);
  ny_ = std::clamp(static_cast<int>(std::ceil(h / cell)), 1, 4096);
  dx_ = w / nx_;
  dy_ = h / ny_;

  const double pad_x = 1e-9 * w, pad_y = 1e-9 * h;
  std::vector<int> count(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  auto range = [&](int c, int& i0, int& i1, int& j0, int& j1) {
    const auto& t = mesh.cell(c);
    double x0 = vs[t[0]].x, x1 = x0, y0 = vs[t[0]].y, y1 = y0;
    for (int k = 1; k < 3; ++k) {
      x0 = std::min(x0, vs[t[k]].x);
      x1 = std::max(x1, vs[t[k]].x);
      y0 = std::min(y0, vs[t[k]].y);
      y1 = std::max(y1, vs[t[k]].y);
    }
    i0 = std::clamp(static_cast<int>(std::floor((x0 - pad_x - lo_.x) / dx_)), 0, nx_ - 1);
    i1 = std::clamp(static_cast<int>(std::floor((x1 + pad_x - lo_.x) / dx_)), 0, nx_ - 1);
    j0 = std::clamp(static_cast<int>(std::floor((y0 - pad_y - lo_.y) / dy_)), 0, ny_ - 1);
    j1 = std::clamp(static_cast<int>(std::floor((y1 + pad_y - lo_.y) / dy_)), 0, ny_ - 1);
  };
  const int nc = static_cast<int>(mesh.num_cells());
  for (int c = 0; c < nc; ++c) {
    int i0, i1, j0, j1;
    range(c, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) ++count[static_cast<std::size_t>(j) * nx_ + i + 1];
  }
  offset_.assign(count.size(), 0);
  for (std::size_t b = 1; b < count.size(); ++b) offset_[b] = offset_[b - 1] + count[b];
  index_.resize(offset_.back());
  std::vector<int> fill(offset_.begin(), offset_.end() - 1);
  for (int c = 0; c < nc; ++c) {
    int i0, i1, j0, j1;
    range(c, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) index_[fill[static_cast<std::size_t>(j) * nx_ + i]++] = c;
  }
}

std::optional<int> PointLocator::locate(Point2 p) const {
  const double w = hi_.x - lo_.x, h = hi_.y - lo_.y;
  const double tol_x = 1e-9 * std::max(w, 1.0), tol_y = 1e-9 * std::max(h, 1.0);
  if (p.x < lo_.x - tol_x || p.x > hi_.x + tol_x || p.y < lo_.y - tol_y || p.y > hi_.y + tol_y)
    return std::nullopt;
  const int i = std::clamp(static_cast<int>(std::floor((p.x - lo_.x) / dx_)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y - lo_.y) / dy_)), 0, ny_ - 1);
  const std::size_t b = static_cast<std::size_t>(j) * nx_ + i;
  const auto& vs = mesh_->vertices();
  for (int k = offset_[b]; k < offset_[b + 1]; ++k) {
    const auto& t = mesh_->cell(index_[k]);
    const auto l = barycentric(vs[t[0]], vs[t[1]], vs[t[2]], p);
    if (l[0] >= -kBaryTol && l[1] >= -kBaryTol && l[2] >= -kBaryTol) return index_[k];
  }
  return std::nullopt;
}

std::optional<int> locate_point(const Mesh& mesh, Point2 p) {
  const auto& vs = mesh.vertices();
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto& t = mesh.cell(c);
    const auto l = barycentric(vs[t[0]], vs[t[1]], vs[t[2]], p);
    if (l[0] >= -kBaryTol && l[1] >= -kBaryTol && l[2] >= -kBaryTol) return c;
  }
  return std::nullopt;
}

std::optional<int> ray_first_cell(const Mesh& mesh, int i, Vec2 direction) {
  const double dn = norm(direction);
  if (dn == 0.0) throw MeshError("ray_first_cell: zero direction");
  const Point2 xi = mesh.vertex(i);
  for (int c : mesh.vertex_cells(i)) {  // ascending cell ids
    const auto& t = mesh.cell(c);
    int k = 0;
    while (t[k] != i) ++k;
    const Vec2 e1 = mesh.vertex(t[(k + 1) % 3]) - xi;
    const Vec2 e2 = mesh.vertex(t[(k + 2) % 3]) - xi;
    if (cross(e1, direction) >= -1e-12 * norm(e1) * dn && cross(direction, e2) >= -1e-12 * norm(e2) * dn)
      return c;
  }
  return std::nullopt;
}

std::vector<int> hanging_vertices(const Mesh& mesh) {
  // Bucket the vertices, then test each edge against nearby vertices.
  const auto& vs = mesh.vertices();
  Point2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& p : vs) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const int n = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(vs.size()))), 1, 2048);
  const double dx = std::max(hi.x - lo.x, 1e-300) / n, dy = std::max(hi.y - lo.y, 1e-300) / n;
  auto bx = [&](double x) { return std::clamp(static_cast<int>((x - lo.x) / dx), 0, n - 1); };
  auto by = [&](double y) { return std::clamp(static_cast<int>((y - lo.y) / dy), 0, n - 1); };
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(n) * n);
  for (int v = 0; v < static_cast<int>(vs.size()); ++v) bucket[by(vs[v].y) * n + bx(vs[v].x)].push_back(v);

  std::vector<int> out;
  for (const Edge& e : mesh.edges()) {
    const Point2 a = vs[e.v[0]], b = vs[e.v[1]];
    const double len = norm(b - a);
    const int i0 = bx(std::min(a.x, b.x)), i1 = bx(std::max(a.x, b.x));
    const int j0 = by(std::min(a.y, b.y)), j1 = by(std::max(a.y, b.y));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        for (int w : bucket[j * n + i]) {
          if (w == e.v[0] || w == e.v[1]) continue;
          const Point2 p = vs[w];
          const double t = dot(p - a, b - a) / (len * len);
          if (t <= 0.0 || t >= 1.0) continue;
          if (std::abs(cross(b - a, p - a)) / len <= 1e-10 * len) out.push_back(w);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace afc
