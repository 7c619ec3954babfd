#include "afc/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace afc {

namespace {

constexpr double kTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kTol; }

BoundarySpec all_dirichlet() {
  return {[](Point2, Point2) { return BoundaryTag::Dirichlet; }, nullptr, {}};
}

}  // namespace

std::string grid_name(GridId g) {
  switch (g) {
    case GridId::Grid1: return "1";
    case GridId::Grid2: return "2";
    case GridId::Grid3: return "3";
    case GridId::Grid4: return "4";
    case GridId::Hemker: return "hemker";
  }
  return "?";
}

std::optional<GridId> parse_grid(std::string_view name) {
  for (GridId g : {GridId::Grid1, GridId::Grid2, GridId::Grid3, GridId::Grid4, GridId::Hemker})
    if (grid_name(g) == name) return g;
  return std::nullopt;
}

BenchmarkCase case_boundary_layer() {
  const double eps = 1e-2;
  BenchmarkCase c;
  c.name = "boundary_layer";
  c.default_grid = GridId::Grid1;
  c.grids = {GridId::Grid1, GridId::Grid2, GridId::Grid3};
  c.boundary = all_dirichlet();
  ProblemDefinition& p = c.problem;
  p.epsilon = eps;
  p.sigma = 1.0;
  p.convection = [](double, double, double) { return Vec2{2.0, 3.0}; };
  p.reaction = [](double, double) { return 1.0; };
  p.exact = [eps](double x, double y) {
    const double e1 = std::exp(2.0 * (x - 1.0) / eps), e2 = std::exp(3.0 * (y - 1.0) / eps);
    return x * y * y - y * y * e1 - x * e2 + e1 * e2;
  };
  p.exact_gradient = [eps](double x, double y) {
    const double e1 = std::exp(2.0 * (x - 1.0) / eps), e2 = std::exp(3.0 * (y - 1.0) / eps);
    const double e12 = e1 * e2;
    return Vec2{y * y - y * y * (2.0 / eps) * e1 - e2 + (2.0 / eps) * e12,
                2.0 * x * y - 2.0 * y * e1 - x * (3.0 / eps) * e2 + (3.0 / eps) * e12};
  };
  p.source = [eps](double x, double y) {
    const double e1 = std::exp(2.0 * (x - 1.0) / eps), e2 = std::exp(3.0 * (y - 1.0) / eps);
    const double e12 = e1 * e2;
    const double u = x * y * y - y * y * e1 - x * e2 + e12;
    const double ux = y * y - y * y * (2.0 / eps) * e1 - e2 + (2.0 / eps) * e12;
    const double uy = 2.0 * x * y - 2.0 * y * e1 - x * (3.0 / eps) * e2 + (3.0 / eps) * e12;
    const double uxx = -y * y * (4.0 / (eps * eps)) * e1 + (4.0 / (eps * eps)) * e12;
    const double uyy = 2.0 * x - 2.0 * e1 - x * (9.0 / (eps * eps)) * e2 + (9.0 / (eps * eps)) * e12;
    return -eps * (uxx + uyy) + 2.0 * ux + 3.0 * uy + u;
  };
  p.dirichlet = p.exact;
  return c;
}

BenchmarkCase case_corner_singularity() {
  BenchmarkCase c;
  c.name = "corner_singularity";
  c.default_grid = GridId::Grid4;
  c.grids = {GridId::Grid4};
  c.boundary = all_dirichlet();
  ProblemDefinition& p = c.problem;
  p.epsilon = 1e-6;
  p.sigma = 1.0;
  p.convection = [](double, double, double) { return Vec2{3.0, 1.0}; };
  p.reaction = [](double, double) { return 1.0; };
  p.source = [](double x, double y) {
    const double r = std::hypot(x - 0.5, y - 0.5);
    return 100.0 * r * (r - 0.5) * (r - std::sqrt(2.0) / 2.0);
  };
  return c;
}

BenchmarkCase case_multi_regime() {
  const double r0 = 17.0 / 8.0;
  const double rd = std::sqrt(1217.0) / 16.0 - r0;
  BenchmarkCase c;
  c.name = "multi_regime";
  c.default_grid = GridId::Grid1;
  c.grids = {GridId::Grid1, GridId::Grid2, GridId::Grid3};
  c.boundary.tag = [](Point2 a, Point2 b) {
    return near(a.x, 1.0) && near(b.x, 1.0) ? BoundaryTag::Neumann : BoundaryTag::Dirichlet;
  };
  c.cutlines = {{"x=0.5", {0.5, 0.0}, {0.5, 1.0}},
                {"x=1", {1.0, 0.0}, {1.0, 1.0}},
                {"x=y", {0.0, 0.0}, {1.0, 1.0}},
                {"x=1-y", {0.0, 1.0}, {1.0, 0.0}}};
  ProblemDefinition& p = c.problem;
  p.epsilon = 1e-6;
  p.sigma = 0.0;
  auto radius = [](double x, double y) { return std::hypot(x - 1.0, y + 27.0 / 16.0); };
  p.convection = [=](double x, double y, double) {
    const double r = radius(x, y);
    double psi;
    if (std::abs(r - r0) <= rd) psi = 1.0 / r;
    else if (r > r0 + rd) psi = std::exp(-1000.0 * (r - (r0 + rd)) * (r - (r0 + rd))) / (r0 + rd);
    else psi = std::exp(-1000.0 * (r - (r0 - rd)) * (r - (r0 - rd))) / (r0 - rd);
    return (r * psi) * Vec2{y + 27.0 / 16.0, 1.0 - x};
  };
  p.reaction = [=](double x, double y) {
    const double r = radius(x, y);
    if (std::abs(r - r0) <= rd) return 1.0;
    const double edge = r > r0 + rd ? r0 + rd : r0 - rd;
    return std::exp(-100.0 * (r - edge) * (r - edge));
  };
  p.dirichlet = [](double x, double y) {
    if (near(y, 1.0)) return 1.0;
    if (near(x, 0.0) && y >= 0.125 - kTol && y <= 0.25 + kTol) return 1.0;
    return 0.0;
  };
  return c;
}

BenchmarkCase case_hemker() {
  BenchmarkCase c;
  c.name = "hemker";
  c.default_grid = GridId::Hemker;
  c.grids = {GridId::Hemker};
  auto on_circle = [](Point2 p) { return std::abs(std::hypot(p.x, p.y) - 1.0) <= 1e-9; };
  c.boundary.tag = [=](Point2 a, Point2 b) {
    if (near(a.x, -3.0) && near(b.x, -3.0)) return BoundaryTag::Dirichlet;
    if (on_circle(a) && on_circle(b)) return BoundaryTag::Dirichlet;
    return BoundaryTag::Neumann;
  };
  c.boundary.curve = [=](Point2 a, Point2 b) { return on_circle(a) && on_circle(b) ? 0 : -1; };
  c.boundary.curves = {Circle{{0.0, 0.0}, 1.0}};
  c.cutlines = {{"x=4", {4.0, -3.0}, {4.0, 3.0}}};
  c.smear_reference = 0.0723;
  ProblemDefinition& p = c.problem;
  p.epsilon = 1e-4;
  p.sigma = 0.0;
  p.convection = [](double, double, double) { return Vec2{1.0, 0.0}; };
  p.dirichlet = [](double x, double y) { return std::hypot(x, y) < 2.0 ? 1.0 : 0.0; };
  return c;
}

BenchmarkCase case_nonlinear() {
  const double eps = 1e-3;
  BenchmarkCase c;
  c.name = "nonlinear";
  c.default_grid = GridId::Grid1;
  c.grids = {GridId::Grid1, GridId::Grid2, GridId::Grid3};
  c.boundary = all_dirichlet();
  ProblemDefinition& p = c.problem;
  p.epsilon = eps;
  p.sigma = 0.0;
  p.nonlinear = true;
  p.convection = [](double, double, double u) { return Vec2{u, u}; };
  auto logistic = [eps](double x, double y) { return 1.0 / (1.0 + std::exp((-4.0 * x + 4.0 * y - 1.0) / (32.0 * eps))); };
  p.exact = [=](double x, double y) { return 0.75 - 0.25 * logistic(x, y); };
  p.exact_gradient = [=](double x, double y) {
    const double s = logistic(x, y);
    const double g = s * (1.0 - s) / (32.0 * eps);
    return Vec2{-g, g};
  };
  // b . grad u vanishes because u_x = -u_y.
  p.source = [=](double x, double y) {
    const double s = logistic(x, y);
    return (1.0 - 2.0 * s) * s * (1.0 - s) / (128.0 * eps);
  };
  p.dirichlet = p.exact;
  return c;
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"boundary_layer", "corner_singularity", "multi_regime", "hemker",
                                              "nonlinear"};
  return names;
}

BenchmarkCase case_by_name(std::string_view name) {
  if (name == "boundary_layer") return case_boundary_layer();
  if (name == "corner_singularity") return case_corner_singularity();
  if (name == "multi_regime") return case_multi_regime();
  if (name == "hemker") return case_hemker();
  if (name == "nonlinear") return case_nonlinear();
  std::string list;
  for (const auto& n : case_names()) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown case '" + std::string(name) + "' (valid: " + list + ")");
}

namespace {

// Squares [x0 + i h, ...] split by the NE or NW diagonal.
void add_square(std::vector<Triangle>& t, int sw, int se, int ne, int nw, bool north_east) {
  if (north_east) {
    t.push_back({sw, se, ne});
    t.push_back({sw, ne, nw});
  } else {
    t.push_back({sw, se, nw});
    t.push_back({se, ne, nw});
  }
}

Mesh unit_square(GridId grid, const BoundarySpec& boundary) {
  std::vector<Point2> pts;
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i) pts.push_back({0.5 * i, 0.5 * j});
  auto id = [](int i, int j) { return j * 3 + i; };
  std::vector<Triangle> tri;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const int sw = id(i, j), se = id(i + 1, j), ne = id(i + 1, j + 1), nw = id(i, j + 1);
      if (grid == GridId::Grid3) {
        const int c = static_cast<int>(pts.size());
        pts.push_back({0.5 * i + 0.25, 0.5 * j + 0.25});
        tri.push_back({sw, se, c});
        tri.push_back({se, ne, c});
        tri.push_back({ne, nw, c});
        tri.push_back({nw, sw, c});
      } else {
        add_square(tri, sw, se, ne, nw, grid == GridId::Grid1);
      }
    }
  }
  return build_mesh(pts, std::move(tri), boundary);
}

Mesh l_shape(const BoundarySpec& boundary) {
  const std::vector<Point2> pts{{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5},
                                {1.0, 0.5}, {0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}};
  std::vector<Triangle> tri;
  add_square(tri, 0, 1, 3, 2, true);
  add_square(tri, 2, 3, 6, 5, true);
  add_square(tri, 3, 4, 7, 6, true);
  return build_mesh(pts, std::move(tri), boundary);
}

// Sixteen boundary lattice points of [-2,2]^2 in counterclockwise order are
// joined to their radial projections on the unit circle through a middle
// ring; outside the square the channel is covered by unit squares.
Mesh hemker(const BoundarySpec& boundary) {
  std::vector<Point2> pts;
  std::vector<Point2> square;
  for (int k = -2; k < 2; ++k) square.push_back({2.0, static_cast<double>(k)});
  for (int k = 2; k > -2; --k) square.push_back({static_cast<double>(k), 2.0});
  for (int k = 2; k > -2; --k) square.push_back({-2.0, static_cast<double>(k)});
  for (int k = -2; k < 2; ++k) square.push_back({static_cast<double>(k), -2.0});
  const int m = static_cast<int>(square.size());

  auto lattice = [](int i, int j) { return (j + 3) * 13 + (i + 3); };
  for (int j = -3; j <= 3; ++j)
    for (int i = -3; i <= 9; ++i) pts.push_back({static_cast<double>(i), static_cast<double>(j)});
  const int circle0 = static_cast<int>(pts.size());
  for (const Point2& s : square) pts.push_back((1.0 / norm(s)) * s);
  const int middle0 = static_cast<int>(pts.size());
  for (const Point2& s : square) pts.push_back(0.5 * (s + (1.0 / norm(s)) * s));

  std::vector<Triangle> tri;
  for (int k = 0; k < m; ++k) {
    const int k1 = (k + 1) % m;
    const int sq0 = lattice(static_cast<int>(square[k].x), static_cast<int>(square[k].y));
    const int sq1 = lattice(static_cast<int>(square[k1].x), static_cast<int>(square[k1].y));
    const int c0 = circle0 + k, c1 = circle0 + k1, m0 = middle0 + k, m1 = middle0 + k1;
    tri.push_back({c0, c1, m1});
    tri.push_back({c0, m1, m0});
    tri.push_back({m0, m1, sq1});
    tri.push_back({m0, sq1, sq0});
  }
  for (int j = -3; j < 3; ++j) {
    for (int i = -3; i < 9; ++i) {
      if (i >= -2 && i < 2 && j >= -2 && j < 2) continue;
      add_square(tri, lattice(i, j), lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1), true);
    }
  }
  // Drop the lattice points that ended up inside the square.
  std::vector<int> remap(pts.size(), -1);
  std::vector<Point2> kept;
  for (int v = 0; v < static_cast<int>(pts.size()); ++v) {
    const Point2 p = pts[v];
    const bool hidden = v < circle0 && std::abs(p.x) < 2.0 && std::abs(p.y) < 2.0;
    if (!hidden) {
      remap[v] = static_cast<int>(kept.size());
      kept.push_back(p);
    }
  }
  for (Triangle& t : tri)
    for (int& v : t) v = remap[v];
  return build_mesh(kept, std::move(tri), boundary);
}

}  // namespace

Mesh make_root_grid(GridId grid, const BoundarySpec& boundary) {
  switch (grid) {
    case GridId::Grid1:
    case GridId::Grid2:
    case GridId::Grid3: return unit_square(grid, boundary);
    case GridId::Grid4: return l_shape(boundary);
    case GridId::Hemker: return hemker(boundary);
  }
  throw std::invalid_argument("make_root_grid: unknown grid");
}

Mesh make_root_grid(GridId grid) {
  if (grid == GridId::Hemker) return make_root_grid(grid, case_hemker().boundary);
  return make_root_grid(grid, all_dirichlet());
}

std::vector<CutlineSample> cutline_sample(const Mesh& mesh, std::span<const double> u, Point2 from, Point2 to,
                                          int n_intervals) {
  if (n_intervals < 1) throw std::invalid_argument("cutline_sample: need at least one interval");
  const PointLocator locator(mesh);
  const double length = norm(to - from);
  std::vector<CutlineSample> out;
  out.reserve(n_intervals + 1);
  for (int k = 0; k <= n_intervals; ++k) {
    const double t = static_cast<double>(k) / n_intervals;
    const Point2 x = from + t * (to - from);
    if (const auto v = evaluate_fe(mesh, locator, u, x)) out.push_back({t * length, x, *v});
  }
  return out;
}

}  // namespace afc
