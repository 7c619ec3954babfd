#pragma once

#include <limits>
#include <span>

#include "afc/problems.hpp"

namespace afc {

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();

// y2 - y1 where y1 (y2) is the first coordinate whose value reaches lo (hi).
// NaN when a threshold is never reached.
double smear_metric(std::span<const double> coords, std::span<const double> values, double lo = 0.1,
                    double hi = 0.9);
double smear_metric(std::span<const CutlineSample> samples, double lo = 0.1, double hi = 0.9);

double osc_metric(std::span<const double> u);

// Least-squares slope of log(value) against log(dofs) over the last k pairs.
// Pairs with nonpositive entries are skipped; NaN with fewer than two usable pairs.
double convergence_slope(std::span<const double> dofs, std::span<const double> values, int k = 6);

}  // namespace afc
