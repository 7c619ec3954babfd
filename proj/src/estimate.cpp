#include "afc/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "afc/quadrature.hpp"

namespace afc {

namespace {

Vec2 cell_gradient(const Mesh& mesh, const CellGeometry& geo, int c, std::span<const double> u) {
  const Triangle& t = mesh.cell(c);
  Vec2 g{};
  for (int m = 0; m < 3; ++m) g = g + u[t[m]] * geo.grad[m];
  return g;
}

// Unit normal of edge e pointing out of cell c.
Vec2 outward_normal(const Mesh& mesh, int e, int c) {
  const Edge& edge = mesh.edge(e);
  const Point2 a = mesh.vertex(edge.v[0]), b = mesh.vertex(edge.v[1]);
  const Vec2 t = b - a;
  Vec2 n{t.y, -t.x};
  n = (1.0 / norm(n)) * n;
  const Point2 mid = midpoint(a, b);
  if (dot(n, mid - mesh.barycenter(c)) < 0.0) n = -1.0 * n;
  return n;
}

// min{a, b / sigma} with sigma = 0 selecting a.
double weight_min(double eps_branch, double sigma_branch_numerator, double sigma_denominator) {
  if (sigma_denominator <= 0.0) return eps_branch;
  return std::min(eps_branch, sigma_branch_numerator / sigma_denominator);
}

}  // namespace

double edge_constant(const CellGeometry& cell, int cell_id) {
  double c_cos = -1.0;
  for (double a : cell.angles) c_cos = std::max(c_cos, std::cos(a));
  const double rho = cell.inscribed_diameter;
  const double denom = 1.0 - c_cos * rho * rho * rho;
  if (!(denom > 0.0))
    throw EstimatorError("edge_constant: nonpositive denominator on cell " + std::to_string(cell_id), cell_id);
  return 4.0 * std::sqrt(2.0) * (1.0 + std::sqrt(2.0)) * cell.area / denom;
}

double element_residual(const Mesh& mesh, int c, const ProblemDefinition& problem, std::span<const double> u) {
  const CellGeometry geo = mesh.cell_geometry(c);
  const Triangle& t = mesh.cell(c);
  const Vec2 grad = cell_gradient(mesh, geo, c, u);
  const std::array<Point2, 3> p{mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])};
  const TriangleRule& rule = degree4_rule();
  double s = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const auto& l = rule.points[q];
    const double x = l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x;
    const double y = l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y;
    const double uq = l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
    const double r = problem.source(x, y) - dot(problem.convection(x, y, uq), grad) - problem.reaction(x, y) * uq;
    s += rule.weights[q] * r * r;
  }
  return std::sqrt(s * geo.area);
}

double face_residual(const Mesh& mesh, int e, const ProblemDefinition& problem, std::span<const double> u) {
  const Edge& edge = mesh.edge(e);
  const Point2 a = mesh.vertex(edge.v[0]), b = mesh.vertex(edge.v[1]);
  const double h = norm(b - a);
  if (!edge.boundary()) {
    const int k1 = edge.cells[0], k2 = edge.cells[1];
    const Vec2 n = outward_normal(mesh, e, k1);
    const double jump = problem.epsilon * dot(cell_gradient(mesh, mesh.cell_geometry(k1), k1, u) -
                                                  cell_gradient(mesh, mesh.cell_geometry(k2), k2, u),
                                              n);
    return std::abs(jump) * std::sqrt(h);
  }
  if (edge.side.tag != BoundaryTag::Neumann) return 0.0;
  const int k = edge.cells[0];
  const double flux = problem.epsilon * dot(cell_gradient(mesh, mesh.cell_geometry(k), k, u), outward_normal(mesh, e, k));
  const LineRule& line = gauss_line_rule(3);
  double s = 0.0;
  for (std::size_t q = 0; q < line.points.size(); ++q) {
    const Point2 x = a + line.points[q] * (b - a);
    const double r = problem.neumann(x.x, x.y) - flux;
    s += line.weights[q] * r * r;
  }
  return std::sqrt(s * h);
}

double EstimateBreakdown::eta() const { return std::sqrt(eta1_total + eta2_total + eta3_total); }
double EstimateBreakdown::eta1() const { return std::sqrt(eta1_total); }
double EstimateBreakdown::eta2() const { return std::sqrt(eta2_total); }
double EstimateBreakdown::eta3() const { return std::sqrt(eta3_total); }

EstimateBreakdown assemble_estimate(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                    std::span<const double> u, const LimiterOutput& limiter,
                                    const EstimatorConstants& k) {
  (void)dofs;
  const double eps = problem.epsilon, sigma = problem.sigma;
  if (!(eps > 0.0)) throw std::invalid_argument("assemble_estimate: epsilon must be positive");
  EstimateBreakdown out;
  out.eta1_sq.resize(mesh.num_cells());
  out.eta2_sq.resize(mesh.num_edges());
  out.eta3_sq.resize(mesh.num_edges(), 0.0);

  std::vector<double> cedge(mesh.num_cells());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    cedge[c] = edge_constant(geo, c);
    const double ci2 = k.c_interp * k.c_interp;
    const double w = weight_min(4.0 * ci2 * geo.diameter * geo.diameter / eps, 4.0 * ci2, sigma);
    const double r = element_residual(mesh, c, problem, u);
    out.eta1_sq[c] = w * r * r;
    out.eta1_total += out.eta1_sq[c];
  }

  const bool has_b = limiter.stabilization.size() > 0;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edge(e);
    const double h = norm(mesh.vertex(edge.v[1]) - mesh.vertex(edge.v[0]));
    const double cf2 = k.c_face * k.c_face;
    const double w2 = weight_min(4.0 * cf2 * h / eps, 4.0 * cf2 / std::sqrt(eps), std::sqrt(sigma));
    const double rf = face_residual(mesh, e, problem, u);
    out.eta2_sq[e] = w2 * rf * rf;
    out.eta2_total += out.eta2_sq[e];

    if (!has_b) continue;
    const double be = limiter.edge_weight(edge.v[0], edge.v[1]);
    if (be == 0.0) continue;
    double cmax = cedge[edge.cells[0]];
    if (!edge.boundary()) cmax = std::max(cmax, cedge[edge.cells[1]]);
    const double w3 = weight_min(4.0 * k.kappa1(cmax) * h * h / eps, 4.0 * k.kappa2(cmax), sigma);
    const double du = u[edge.v[1]] - u[edge.v[0]];
    out.eta3_sq[e] = w3 * be * be * du * du / (h * h);
    out.eta3_total += out.eta3_sq[e];
  }
  return out;
}

std::vector<double> cell_indicators(const Mesh& mesh, const EstimateBreakdown& est) {
  std::vector<double> eta(mesh.num_cells());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    double s = est.eta1_sq[c];
    for (int e : mesh.cell_edges(c)) {
      const double share = mesh.edge(e).boundary() ? 1.0 : 0.5;
      s += share * (est.eta2_sq[e] + est.eta3_sq[e]);
    }
    eta[c] = std::sqrt(s);
  }
  return eta;
}

ErrorNorms energy_norm_error(const Mesh& mesh, const ProblemDefinition& problem, std::span<const double> u) {
  if (!problem.has_exact()) throw std::invalid_argument("energy_norm_error: problem has no exact solution");
  const TriangleRule& rule = degree4_rule();
  double l2 = 0.0, h1 = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    const Triangle& t = mesh.cell(c);
    const Vec2 grad = cell_gradient(mesh, geo, c, u);
    const std::array<Point2, 3> p{mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])};
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      const double x = l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x;
      const double y = l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y;
      const double uq = l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
      const double w = rule.weights[q] * geo.area;
      const double e = problem.exact(x, y) - uq;
      const Vec2 ge = problem.exact_gradient(x, y) - grad;
      l2 += w * e * e;
      h1 += w * dot(ge, ge);
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(l2);
  out.h1_semi = std::sqrt(h1);
  out.energy = std::sqrt(problem.epsilon * h1 + problem.sigma * l2);
  return out;
}

}  // namespace afc
