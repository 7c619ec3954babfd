#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afc/mesh.hpp"
#include "afc/space.hpp"

namespace afc {

enum class GridId { Grid1 = 1, Grid2 = 2, Grid3 = 3, Grid4 = 4, Hemker = 5 };

std::string grid_name(GridId g);
std::optional<GridId> parse_grid(std::string_view name);

struct Cutline {
  std::string name;
  Point2 from, to;
};

struct BenchmarkCase {
  std::string name;
  ProblemDefinition problem;
  GridId default_grid = GridId::Grid1;
  std::vector<GridId> grids;  // grids the case is defined on
  BoundarySpec boundary;      // boundary classification on its domain
  std::vector<Cutline> cutlines;
  std::optional<double> smear_reference;
};

BenchmarkCase case_boundary_layer();
BenchmarkCase case_corner_singularity();
BenchmarkCase case_multi_regime();
BenchmarkCase case_hemker();
BenchmarkCase case_nonlinear();

const std::vector<std::string>& case_names();
// Throws std::invalid_argument listing the valid names.
BenchmarkCase case_by_name(std::string_view name);

// Level-0 meshes. Grids 1-3 cover the unit square, Grid 4 the L-shaped
// domain (0,1)^2 \ [0.5,1)x(0,0.5], Hemker the channel around the unit disc.
Mesh make_root_grid(GridId grid, const BoundarySpec& boundary);
// Boundary classification used when no case is attached: every side Dirichlet
// (Hemker: its own case specification).
Mesh make_root_grid(GridId grid);

struct CutlineSample {
  double s;  // arc-length coordinate along the segment
  Point2 x;
  double value;
};

std::vector<CutlineSample> cutline_sample(const Mesh& mesh, std::span<const double> u, Point2 from, Point2 to,
                                          int n_intervals);

}  // namespace afc
