#include "afc/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace afc {

const TriangleRule& midpoint_rule() {
  static const TriangleRule rule{
      {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  return rule;
}

const TriangleRule& degree4_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2, w2 = 0.109951743655322;
    r.points = {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

const LineRule& gauss_line_rule(int npoints) {
  static const LineRule two = [] {
    const double d = 0.5 / std::sqrt(3.0);
    return LineRule{{0.5 - d, 0.5 + d}, {0.5, 0.5}};
  }();
  static const LineRule three = [] {
    const double d = 0.5 * std::sqrt(0.6);
    return LineRule{{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  }();
  if (npoints == 2) return two;
  if (npoints == 3) return three;
  throw std::invalid_argument("gauss_line_rule: only 2 or 3 points available");
}

}  // namespace afc
