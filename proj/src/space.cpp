#include "afc/space.hpp"

#include <stdexcept>

#include "afc/quadrature.hpp"

namespace afc {

DofMap make_dofs(const Mesh& mesh) {
  DofMap dofs;
  dofs.dirichlet.assign(mesh.num_vertices(), 0);
  for (const Edge& e : mesh.edges()) {
    if (e.boundary() && e.side.tag == BoundaryTag::Dirichlet) dofs.dirichlet[e.v[0]] = dofs.dirichlet[e.v[1]] = 1;
  }
  dofs.free_count = 0;
  for (auto d : dofs.dirichlet) dofs.free_count += d ? 0 : 1;
  return dofs;
}

GalerkinSystem assemble_galerkin(const Mesh& mesh, const ProblemDefinition& problem,
                                 std::span<const double> u_prev,
                                 std::shared_ptr<const SparsityPattern> pattern) {
  if (problem.nonlinear && u_prev.size() != mesh.num_vertices())
    throw std::invalid_argument("assemble_galerkin: nonlinear problem needs the previous iterate");
  if (!pattern) pattern = make_pattern(mesh);
  GalerkinSystem sys{SparseMatrix(pattern), std::vector<double>(mesh.num_vertices(), 0.0)};
  auto& values = sys.matrix.values();
  const SparsityPattern& pat = *pattern;
  // Convection and load use the edge-midpoint rule. The reaction term gets
  // the degree-4 rule so that mass entries stay exact for affine c.
  const TriangleRule& rule = midpoint_rule();
  const TriangleRule& mass_rule = degree4_rule();
  const double eps = problem.epsilon;

  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Triangle& t = mesh.cell(c);
    const CellGeometry geo = mesh.cell_geometry(c);
    const std::array<Point2, 3> p{mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])};
    double local[3][3] = {};
    double load[3] = {};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) local[i][j] = eps * geo.area * dot(geo.grad[i], geo.grad[j]);

    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      const double w = rule.weights[q] * geo.area;
      const double x = l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x;
      const double y = l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y;
      double uq = 0.0;
      if (problem.nonlinear) uq = l[0] * u_prev[t[0]] + l[1] * u_prev[t[1]] + l[2] * u_prev[t[2]];
      const Vec2 b = problem.convection(x, y, uq);
      const double f = problem.source(x, y);
      for (int j = 0; j < 3; ++j) {
        const double bgrad = dot(b, geo.grad[j]);
        for (int i = 0; i < 3; ++i) local[i][j] += w * bgrad * l[i];
      }
      for (int i = 0; i < 3; ++i) load[i] += w * f * l[i];
    }
    for (std::size_t q = 0; q < mass_rule.weights.size(); ++q) {
      const auto& l = mass_rule.points[q];
      const double x = l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x;
      const double y = l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y;
      const double wr = mass_rule.weights[q] * geo.area * problem.reaction(x, y);
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) local[i][j] += wr * l[j] * l[i];
    }

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) values[pat.find(t[i], t[j])] += local[i][j];
      sys.rhs[t[i]] += load[i];
    }
  }

  const LineRule& line = gauss_line_rule(2);
  for (const Edge& e : mesh.edges()) {
    if (!e.boundary() || e.side.tag != BoundaryTag::Neumann) continue;
    const Point2 a = mesh.vertex(e.v[0]), b = mesh.vertex(e.v[1]);
    const double len = norm(b - a);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      const Point2 x = a + s * (b - a);
      const double g = problem.neumann(x.x, x.y) * line.weights[q] * len;
      sys.rhs[e.v[0]] += g * (1.0 - s);
      sys.rhs[e.v[1]] += g * s;
    }
  }
  return sys;
}

std::vector<double> dirichlet_values(const Mesh& mesh, const DofMap& dofs,
                                     const ProblemDefinition& problem) {
  std::vector<double> g(mesh.num_vertices(), 0.0);
  for (int i = 0; i < dofs.size(); ++i) {
    if (dofs.is_dirichlet(i)) g[i] = problem.dirichlet(mesh.vertex(i).x, mesh.vertex(i).y);
  }
  return g;
}

void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, const DofMap& dofs,
                     std::span<const double> values) {
  for (int i = 0; i < dofs.size(); ++i) {
    if (!dofs.is_dirichlet(i)) continue;
    matrix.set_identity_row(i);
    rhs[i] = values[i];
  }
}

std::vector<double> initial_guess(const DofMap& dofs, std::span<const double> dirichlet) {
  std::vector<double> u(dofs.size(), 0.0);
  for (int i = 0; i < dofs.size(); ++i)
    if (dofs.is_dirichlet(i)) u[i] = dirichlet[i];
  return u;
}

std::optional<double> evaluate_fe(const Mesh& mesh, const PointLocator& locator,
                                  std::span<const double> u, Point2 p) {
  const auto c = locator.locate(p);
  if (!c) return std::nullopt;
  const Triangle& t = mesh.cell(*c);
  const auto l = barycentric(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]), p);
  return l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
}

double evaluate_fe(const Mesh& mesh, std::span<const double> u, Point2 p) {
  const auto c = locate_point(mesh, p);
  if (!c) throw std::out_of_range("evaluate_fe: point outside the domain");
  const Triangle& t = mesh.cell(*c);
  const auto l = barycentric(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]), p);
  return l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
}

}  // namespace afc
