#pragma once

#include <array>
#include <vector>

namespace afc {

// Quadrature on the reference triangle in barycentric coordinates; weights
// sum to one (multiply by the cell area).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

// Edge-midpoint rule, exact for degree 2.
const TriangleRule& midpoint_rule();
// Six-point symmetric rule, exact for degree 4.
const TriangleRule& degree4_rule();

// Gauss-Legendre rule on [0, 1]; weights sum to one.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

const LineRule& gauss_line_rule(int npoints);

}  // namespace afc
