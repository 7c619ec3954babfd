#include "afc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace afc {

double smear_metric(std::span<const double> coords, std::span<const double> values, double lo, double hi) {
  if (coords.size() != values.size()) throw std::invalid_argument("smear_metric: size mismatch");
  double y1 = kNoValue, y2 = kNoValue;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isnan(y1) && values[k] >= lo) y1 = coords[k];
    if (std::isnan(y2) && values[k] >= hi) {
      y2 = coords[k];
      break;
    }
  }
  if (std::isnan(y1) || std::isnan(y2)) return kNoValue;
  return y2 - y1;
}

double smear_metric(std::span<const CutlineSample> samples, double lo, double hi) {
  std::vector<double> s(samples.size()), v(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    s[k] = samples[k].s;
    v[k] = samples[k].value;
  }
  return smear_metric(s, v, lo, hi);
}

double osc_metric(std::span<const double> u) {
  if (u.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
  return *mx - *mn;
}

double convergence_slope(std::span<const double> dofs, std::span<const double> values, int k) {
  if (dofs.size() != values.size()) throw std::invalid_argument("convergence_slope: size mismatch");
  const std::size_t n = dofs.size();
  const std::size_t first = n > static_cast<std::size_t>(k) ? n - k : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = first; i < n; ++i) {
    if (!(dofs[i] > 0.0) || !(values[i] > 0.0)) continue;
    const double x = std::log(dofs[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return kNoValue;
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return kNoValue;
  return (m * sxy - sx * sy) / den;
}

}  // namespace afc
