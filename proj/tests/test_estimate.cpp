#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "afc/estimate.hpp"
#include "afc/nlsolve.hpp"
#include "afc/problems.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace afc;

namespace {

const double kEdgeFactor = 4.0 * std::sqrt(2.0) * (1.0 + std::sqrt(2.0));

Mesh single_triangle(Point2 a, Point2 b, Point2 c) {
  return build_mesh({a, b, c}, {{0, 1, 2}}, testutil::all_dirichlet());
}

std::array<Point2, 3> corners(const Mesh& m, int c) {
  const auto& t = m.cell(c);
  return {m.vertex(t[0]), m.vertex(t[1]), m.vertex(t[2])};
}

Vec2 oracle_gradient(const Mesh& m, int c, std::span<const double> u) {
  const auto g = oracle::hat_gradients(corners(m, c));
  const auto& t = m.cell(c);
  return {g[0].x * u[t[0]] + g[1].x * u[t[1]] + g[2].x * u[t[2]], g[0].y * u[t[0]] + g[1].y * u[t[1]] + g[2].y * u[t[2]]};
}

double oracle_element_residual(const Mesh& m, int c, const ProblemDefinition& p, std::span<const double> u) {
  const Vec2 g = oracle_gradient(m, c, u);
  const auto& t = m.cell(c);
  const double r2 = oracle::integrate(corners(m, c), [&](double x, double y, const std::array<double, 3>& l) {
    const double uq = l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
    const Vec2 b = p.convection(x, y, uq);
    const double r = p.source(x, y) - (b.x * g.x + b.y * g.y) - p.reaction(x, y) * uq;
    return r * r;
  }, 12);
  return std::sqrt(r2);
}

}  // namespace

TEST(EdgeConstant, RightIsoscelesByHand) {
  const Mesh m = single_triangle({0, 0}, {1, 0}, {0, 1});
  const double rho = 2.0 * 0.5 / (2.0 + std::sqrt(2.0)) * 2.0;
  const double expect = kEdgeFactor * 0.5 / (1.0 - std::sqrt(0.5) * rho * rho * rho);
  EXPECT_NEAR(edge_constant(m.cell_geometry(0)), expect, 1e-14 * expect);
}

TEST(EdgeConstant, SmallCellsApproachTheLimitAndLargeCellsThrow) {
  for (double s : {1e-1, 1e-2, 1e-3}) {
    const Mesh m = single_triangle({0, 0}, {s, 0}, {0.5 * s, 0.5 * std::sqrt(3.0) * s});
    const double area = m.cell_area(0);
    const double v = edge_constant(m.cell_geometry(0));
    EXPECT_GT(v, kEdgeFactor * area);
    EXPECT_NEAR(v / (kEdgeFactor * area), 1.0, std::pow(s, 3));
  }
  const Mesh big = single_triangle({0, 0}, {10, 0}, {5, 5 * std::sqrt(3.0)});
  EXPECT_THROW(edge_constant(big.cell_geometry(0), 0), EstimatorError);
  try {
    edge_constant(big.cell_geometry(0), 7);
  } catch (const EstimatorError& e) {
    EXPECT_EQ(e.cell(), 7);
  }
}

TEST(ElementResidual, ConsistencyAndConstantSource) {
  const Mesh m = testutil::square_mesh(2);
  ProblemDefinition p;
  p.epsilon = 0.3;
  p.convection = [](double, double, double) { return Vec2{1.0, -2.0}; };
  p.reaction = [](double, double) { return 0.5; };
  auto u = [](double x, double y) { return 1.0 + x + 2.0 * y; };
  p.source = [&](double x, double y) { return 1.0 - 4.0 + 0.5 * u(x, y); };
  std::vector<double> uh(m.num_vertices());
  for (int v = 0; v < static_cast<int>(uh.size()); ++v) uh[v] = u(m.vertex(v).x, m.vertex(v).y);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) EXPECT_NEAR(element_residual(m, c, p, uh), 0.0, 1e-14);

  ProblemDefinition q;
  q.source = [](double, double) { return 1.0; };
  std::vector<double> zero(m.num_vertices(), 0.0);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
    EXPECT_NEAR(element_residual(m, c, q, zero), std::sqrt(m.cell_area(c)), 1e-15);
}

TEST(ElementResidual, BoundaryLayerDataAgainstHighOrderOracle) {
  const BenchmarkCase bc = case_boundary_layer();
  Mesh m = make_root_grid(GridId::Grid1, bc.boundary);
  for (int k = 0; k < 5; ++k) m = refine_uniform(m);
  std::vector<double> uh(m.num_vertices());
  for (int v = 0; v < static_cast<int>(uh.size()); ++v) uh[v] = bc.problem.exact(m.vertex(v).x, m.vertex(v).y);
  // Degree 4 only resolves the data on cells that are small relative to its variation.
  int checked = 0;
  for (int c = 0; c < static_cast<int>(m.num_cells()); c += 5) {
    const Point2 g = m.barycenter(c);
    if (g.x > 0.7 || g.y > 0.7) continue;
    ++checked;
    const double ref = oracle_element_residual(m, c, bc.problem, uh);
    EXPECT_NEAR(element_residual(m, c, bc.problem, uh), ref, 1e-6 * ref + 1e-13);
  }
  EXPECT_GT(checked, 20);
}

TEST(FaceResidual, AffineJumpDirichletAndNeumann) {
  const Mesh m = testutil::square_mesh(2, testutil::neumann_on_right());
  ProblemDefinition p;
  p.epsilon = 0.2;
  std::vector<double> uh(m.num_vertices());
  for (int v = 0; v < static_cast<int>(uh.size()); ++v) uh[v] = 3.0 * m.vertex(v).x - m.vertex(v).y;
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    const Edge& edge = m.edge(e);
    const double h = norm(m.vertex(edge.v[1]) - m.vertex(edge.v[0]));
    if (!edge.boundary()) {
      EXPECT_NEAR(face_residual(m, e, p, uh), 0.0, 1e-14);
    } else if (edge.side.tag == BoundaryTag::Dirichlet) {
      EXPECT_EQ(face_residual(m, e, p, uh), 0.0);
    } else {
      // u_N = 0: || eps grad u . n || = eps * 3 * sqrt(h)
      EXPECT_NEAR(face_residual(m, e, p, uh), p.epsilon * 3.0 * std::sqrt(h), 1e-14);
    }
  }
  // A kink across the diagonal of one square.
  const Mesh sq = testutil::square_mesh(1);
  std::vector<double> kink{0.0, 0.0, 0.0, 0.0};
  kink[1] = 1.0;  // (1,0) only in cell 0
  ProblemDefinition unit;
  for (int e = 0; e < static_cast<int>(sq.num_edges()); ++e) {
    if (sq.edge(e).boundary()) continue;
    // grad on cell 0 = (1, -1), on cell 1 = 0, normal (1,-1)/sqrt2, h = sqrt2.
    EXPECT_NEAR(face_residual(sq, e, unit, kink), std::sqrt(2.0) * std::pow(2.0, 0.25), 1e-14);
  }
}

TEST(Estimate, InactiveLimiterHasNoStabilizationTerm) {
  const BenchmarkCase bc = case_boundary_layer();
  const Mesh m = refine_uniform(make_root_grid(GridId::Grid1, bc.boundary));
  const DofMap dofs = make_dofs(m);
  const SolveResult r = solve_problem(m, dofs, bc.problem, Method::None, {}, initial_guess(dofs, dirichlet_values(m, dofs, bc.problem)));
  const EstimateBreakdown est = assemble_estimate(m, dofs, bc.problem, r.u, r.limiter);
  EXPECT_EQ(est.eta3_total, 0.0);
  EXPECT_GT(est.eta(), 0.0);
}

TEST(Estimate, TermsMatchScalarRecomputation) {
  std::mt19937 rng(4);
  const BenchmarkCase bc = case_boundary_layer();
  const Mesh m = testutil::random_refined(refine_uniform(make_root_grid(GridId::Grid1, bc.boundary)), 1, rng);
  const DofMap dofs = make_dofs(m);
  const ProblemDefinition& p = bc.problem;
  const SolveResult r = solve_problem(m, dofs, p, Method::Bjk, {}, initial_guess(dofs, dirichlet_values(m, dofs, p)));
  const EstimateBreakdown est = assemble_estimate(m, dofs, p, r.u, r.limiter);
  const double eps = p.epsilon, sigma = p.sigma;
  ASSERT_GT(sigma, 0.0);
  double t1 = 0, t2 = 0, t3 = 0;
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const double h = m.cell_geometry(c).diameter;
    const double w = std::min(4.0 * h * h / eps, 4.0 / sigma);
    const double rk = element_residual(m, c, p, r.u);
    EXPECT_NEAR(est.eta1_sq[c], w * rk * rk, 1e-12 * w * rk * rk + 1e-300);
    t1 += w * rk * rk;
  }
  auto cedge = [&](int c) {
    const auto ang = m.cell_geometry(c).angles;
    const double ccos = std::max({std::cos(ang[0]), std::cos(ang[1]), std::cos(ang[2])});
    const auto q = corners(m, c);
    const double per = norm(q[1] - q[0]) + norm(q[2] - q[1]) + norm(q[0] - q[2]);
    const double rho = 4.0 * m.cell_area(c) / per;
    return kEdgeFactor * m.cell_area(c) / (1.0 - ccos * rho * rho * rho);
  };
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    const Edge& edge = m.edge(e);
    const double h = norm(m.vertex(edge.v[1]) - m.vertex(edge.v[0]));
    double rf = 0.0;
    if (!edge.boundary()) {
      const Vec2 g0 = oracle_gradient(m, edge.cells[0], r.u), g1 = oracle_gradient(m, edge.cells[1], r.u);
      const Vec2 t = m.vertex(edge.v[1]) - m.vertex(edge.v[0]);
      rf = eps * std::abs(dot(g0 - g1, Vec2{t.y, -t.x})) / h * std::sqrt(h);
    }
    const double w2 = std::min(4.0 * h / eps, 4.0 / (std::sqrt(eps) * std::sqrt(sigma)));
    EXPECT_NEAR(est.eta2_sq[e], w2 * rf * rf, 1e-10 * w2 * rf * rf + 1e-14);
    t2 += est.eta2_sq[e];
    const double be = std::max(std::abs(r.limiter.stabilization(edge.v[0], edge.v[1])),
                               std::abs(r.limiter.stabilization(edge.v[1], edge.v[0])));
    double c3 = cedge(edge.cells[0]);
    if (!edge.boundary()) c3 = std::max(c3, cedge(edge.cells[1]));
    const double kappa = 5.0 * c3;
    const double w3 = std::min(4.0 * kappa * h * h / eps, 4.0 * kappa / sigma);
    const double du = r.u[edge.v[1]] - r.u[edge.v[0]];
    const double e3 = w3 * be * be * du * du / (h * h);
    EXPECT_NEAR(est.eta3_sq[e], e3, 1e-12 * e3 + 1e-300);
    t3 += e3;
  }
  EXPECT_NEAR(est.eta1_total, t1, 1e-12 * t1);
  EXPECT_NEAR(est.eta3_total, t3, 1e-12 * t3);
  EXPECT_GT(t3, 0.0);
  EXPECT_NEAR(est.eta() * est.eta(), est.eta1_total + est.eta2_total + est.eta3_total, 1e-12 * est.eta() * est.eta());
  EXPECT_GE(est.eta(), est.eta3());
  // Cell indicators redistribute eta^2 without loss.
  double sum = 0.0;
  for (double v : cell_indicators(m, est)) sum += v * v;
  EXPECT_NEAR(sum, est.eta() * est.eta(), 1e-12 * sum);
}

TEST(Estimate, ZeroSigmaUsesEpsilonBranch) {
  const BenchmarkCase bc = case_nonlinear();
  ASSERT_EQ(bc.problem.sigma, 0.0);
  const Mesh m = refine_uniform(make_root_grid(GridId::Grid1, bc.boundary));
  const DofMap dofs = make_dofs(m);
  std::vector<double> u(m.num_vertices());
  for (int v = 0; v < dofs.size(); ++v) u[v] = bc.problem.exact(m.vertex(v).x, m.vertex(v).y);
  const SolveResult r = solve_problem(m, dofs, bc.problem, Method::Muas, {}, u);
  const EstimateBreakdown est = assemble_estimate(m, dofs, bc.problem, r.u, r.limiter);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const double h = m.cell_geometry(c).diameter;
    const double rk = element_residual(m, c, bc.problem, r.u);
    EXPECT_NEAR(est.eta1_sq[c], 4.0 * h * h / bc.problem.epsilon * rk * rk, 1e-12 * est.eta1_sq[c] + 1e-300);
  }
  EXPECT_TRUE(std::isfinite(est.eta()));
  ProblemDefinition bad = bc.problem;
  bad.epsilon = 0.0;
  EXPECT_THROW(assemble_estimate(m, dofs, bad, r.u, r.limiter), std::invalid_argument);
}

TEST(Estimate, RecomputationOnRefinedMeshIsFresh) {
  const BenchmarkCase bc = case_boundary_layer();
  const Mesh coarse = refine_uniform(make_root_grid(GridId::Grid1, bc.boundary));
  const Mesh fine = refine_red_green(coarse, std::vector<int>{0, 3});
  const Mesh copy = Mesh::assemble(fine.vertices(), fine.cells(),
                                   [&] {
                                     std::vector<std::array<SideInfo, 3>> s(fine.num_cells());
                                     for (int c = 0; c < static_cast<int>(fine.num_cells()); ++c)
                                       for (int k = 0; k < 3; ++k) s[c][k] = fine.side_info(c, k);
                                     return s;
                                   }(),
                                   {}, {}, {}, {});
  const DofMap dofs = make_dofs(fine);
  const SolveResult r = solve_problem(fine, dofs, bc.problem, Method::Bjk, {}, initial_guess(dofs, dirichlet_values(fine, dofs, bc.problem)));
  const EstimateBreakdown a = assemble_estimate(fine, dofs, bc.problem, r.u, r.limiter);
  const EstimateBreakdown b = assemble_estimate(copy, make_dofs(copy), bc.problem, r.u, r.limiter);
  EXPECT_EQ(a.eta1_total, b.eta1_total);
  EXPECT_EQ(a.eta2_total, b.eta2_total);
  EXPECT_EQ(a.eta3_total, b.eta3_total);
}

TEST(EnergyError, AffineInterpolantAndRefinementRate) {
  const Mesh m0 = testutil::square_mesh(2);
  ProblemDefinition p;
  p.epsilon = 0.5;
  p.sigma = 2.0;
  p.exact = [](double x, double y) { return 1.0 - x + 4.0 * y; };
  p.exact_gradient = [](double, double) { return Vec2{-1.0, 4.0}; };
  std::vector<double> u(m0.num_vertices());
  for (int v = 0; v < static_cast<int>(u.size()); ++v) u[v] = p.exact(m0.vertex(v).x, m0.vertex(v).y);
  const ErrorNorms z = energy_norm_error(m0, p, u);
  EXPECT_NEAR(z.l2, 0.0, 1e-13);
  EXPECT_NEAR(z.h1_semi, 0.0, 1e-13);

  p.exact = [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); };
  p.exact_gradient = [](double x, double y) { return Vec2{3 * std::cos(3 * x) * std::cos(2 * y), -2 * std::sin(3 * x) * std::sin(2 * y)}; };
  Mesh m = m0;
  std::vector<double> l2, dofs;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> w(m.num_vertices());
    for (int v = 0; v < static_cast<int>(w.size()); ++v) w[v] = p.exact(m.vertex(v).x, m.vertex(v).y);
    const ErrorNorms e = energy_norm_error(m, p, w);
    EXPECT_NEAR(e.energy, std::sqrt(p.epsilon * e.h1_semi * e.h1_semi + p.sigma * e.l2 * e.l2), 1e-14);
    l2.push_back(e.l2);
    dofs.push_back(static_cast<double>(m.num_vertices()));
    m = refine_uniform(m);
  }
  for (std::size_t k = 1; k < l2.size(); ++k) EXPECT_LT(l2[k], l2[k - 1]);
  const double slope = std::log(l2.back() / l2[l2.size() - 2]) / std::log(dofs.back() / dofs[dofs.size() - 2]);
  EXPECT_NEAR(slope, -1.0, 0.1);
}
