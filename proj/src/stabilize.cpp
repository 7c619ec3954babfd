#include "afc/stabilize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afc {

namespace {

double pos(double a) { return a > 0.0 ? a : 0.0; }
double neg(double a) { return a < 0.0 ? a : 0.0; }

double ratio_or_one(double q, double p) { return p == 0.0 ? 1.0 : std::min(1.0, q / p); }

// Closes B: b_ii = -sum_{j != i} b_ij.
void close_rows(SparseMatrix& b) {
  const SparsityPattern& p = b.pattern();
  auto& v = b.values();
  for (int i = 0; i < p.size(); ++i) {
    double s = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k)
      if (p.column(k) != i) s += v[k];
    v[p.diagonal(i)] = -s;
  }
}

// b_ij = -max((1 - alpha_ij) a_ij, 0, (1 - alpha_ji) a_ji): the composition
// shared by MUAS and SMUAS.
SparseMatrix compose_upwind(const SparseMatrix& a, std::span<const double> alpha) {
  SparseMatrix b(a.pattern_ptr());
  const SparsityPattern& p = a.pattern();
  for (int i = 0; i < p.size(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.column(k) == i) continue;
      const int kt = p.transpose(k);
      b.at(k) = -std::max({(1.0 - alpha[k]) * a.at(k), 0.0, (1.0 - alpha[kt]) * a.at(kt)});
    }
  }
  close_rows(b);
  return b;
}

// Nodal limiter factors R_i^+ / R_i^- of the MUAS method.
void muas_row_factors(const SparseMatrix& a, std::span<const double> u, int i, double& rp, double& rm) {
  const SparsityPattern& p = a.pattern();
  double pp = 0.0, pm = 0.0, qp = 0.0, qm = 0.0;
  for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
    const int j = p.column(k);
    if (j == i) continue;
    const double aij = a.at(k), aji = a.at(p.transpose(k));
    if (aij > 0.0) {
      pp += aij * pos(u[i] - u[j]);
      pm += aij * neg(u[i] - u[j]);
    }
    const double w = std::max(std::abs(aij), aji);
    qp += w * pos(u[j] - u[i]);
    qm += w * neg(u[j] - u[i]);
  }
  rp = ratio_or_one(qp, pp);
  rm = ratio_or_one(qm, pm);
}

std::vector<double> upwind_alpha(const SparsityPattern& p, std::span<const double> u,
                                 std::span<const double> rp, std::span<const double> rm) {
  std::vector<double> alpha(p.nonzeros(), 1.0);
  for (int i = 0; i < p.size(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i) continue;
      if (u[i] > u[j]) alpha[k] = rp[i];
      else if (u[i] < u[j]) alpha[k] = rm[i];
    }
  }
  return alpha;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::None: return "none";
    case Method::Bjk: return "bjk";
    case Method::Mc: return "mc";
    case Method::Muas: return "muas";
    case Method::Smuas: return "smuas";
    case Method::Bbk: return "bbk";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::None, Method::Bjk, Method::Mc, Method::Muas, Method::Smuas, Method::Bbk}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

double LimiterOutput::edge_weight(int i, int j) const {
  const int k = stabilization.pattern().find(i, j);
  if (k < 0) return 0.0;
  return std::max(std::abs(stabilization.at(k)), std::abs(stabilization.at(stabilization.pattern().transpose(k))));
}

SparseMatrix artificial_diffusion(const SparseMatrix& a) {
  SparseMatrix d(a.pattern_ptr());
  const SparsityPattern& p = a.pattern();
  for (int i = 0; i < p.size(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.column(k) == i) continue;
      d.at(k) = -std::max({a.at(k), 0.0, a.at(p.transpose(k))});
    }
  }
  close_rows(d);
  return d;
}

SparseMatrix bjk_preprocess(const SparseMatrix& a, const DofMap& dofs) {
  SparseMatrix out = a;
  const SparsityPattern& p = a.pattern();
  for (int i = 0; i < p.size(); ++i) {
    if (dofs.is_dirichlet(i)) continue;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j != i && dofs.is_dirichlet(j) && a.at(k) < 0.0) out.at(p.transpose(k)) = 0.0;
    }
  }
  return out;
}

std::vector<double> compute_gamma_lp(const Mesh& mesh, const DofMap& dofs) {
  std::vector<double> gamma(mesh.num_vertices(), 1.0);
  std::vector<Point2> pts, hull;
  for (int i = 0; i < static_cast<int>(mesh.num_vertices()); ++i) {
    if (mesh.is_boundary_vertex(i) || dofs.is_dirichlet(i)) continue;
    const Point2 xi = mesh.vertex(i);
    pts.clear();
    double reach = 0.0;
    for (int j : mesh.vertex_neighbors(i)) {
      pts.push_back(mesh.vertex(j));
      reach = std::max(reach, norm(mesh.vertex(j) - xi));
    }
    // Andrew's monotone chain.
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    hull.assign(2 * pts.size(), Point2{});
    std::size_t h = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      while (h >= 2 && orient2d(hull[h - 2], hull[h - 1], pts[k]) <= 0.0) --h;
      hull[h++] = pts[k];
    }
    for (std::size_t k = pts.size() - 1, lower = h + 1; k-- > 0;) {
      while (h >= lower && orient2d(hull[h - 2], hull[h - 1], pts[k]) <= 0.0) --h;
      hull[h++] = pts[k];
    }
    if (h < 4) continue;  // fewer than three hull vertices: degenerate
    --h;
    double dist = std::numeric_limits<double>::max();
    bool inside = true;
    for (std::size_t k = 0; k < h; ++k) {
      const Point2 a = hull[k], b = hull[k + 1];
      if (orient2d(a, b, xi) <= 0.0) inside = false;
      dist = std::min(dist, segment_distance(xi, a, b));
    }
    if (!inside || dist <= 0.0) continue;
    gamma[i] = reach / dist;
  }
  return gamma;
}

LimiterOutput limiter_bjk(const SparseMatrix& a_pre, const SparseMatrix& d, std::span<const double> u,
                          const DofMap& dofs, std::span<const double> gamma) {
  const SparsityPattern& p = a_pre.pattern();
  const int n = p.size();
  std::vector<double> rp(n, 1.0), rm(n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (dofs.is_dirichlet(i)) continue;
    double pp = 0.0, pm = 0.0, q = 0.0;
    double umax = u[i], umin = u[i];
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i) continue;
      const double f = d.at(k) * (u[j] - u[i]);
      pp += pos(f);
      pm += neg(f);
      if (a_pre.at(k) != 0.0 || a_pre.at(p.transpose(k)) > 0.0) {
        umax = std::max(umax, u[j]);
        umin = std::min(umin, u[j]);
        q += gamma[i] * d.at(k);
      }
    }
    rp[i] = ratio_or_one(q * (u[i] - umax), pp);
    rm[i] = ratio_or_one(q * (u[i] - umin), pm);
  }

  std::vector<double> bar(p.nonzeros(), 1.0);
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i) continue;
      const double f = d.at(k) * (u[j] - u[i]);
      bar[k] = f > 0.0 ? rp[i] : (f < 0.0 ? rm[i] : 1.0);
    }
  }

  LimiterOutput out{Method::Bjk, std::vector<double>(p.nonzeros(), 1.0), SparseMatrix(a_pre.pattern_ptr())};
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.column(k) == i) continue;
      out.factors[k] = std::min(bar[k], bar[p.transpose(k)]);
      out.stabilization.at(k) = (1.0 - out.factors[k]) * d.at(k);
    }
  }
  close_rows(out.stabilization);
  return out;
}

LimiterOutput limiter_mc(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                         const DofMap& /*dofs*/) {
  const SparsityPattern& p = a.pattern();
  const int n = p.size();
  std::vector<double> umax(u.begin(), u.end()), umin(u.begin(), u.end());
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (a.at(k) == 0.0) continue;
      umax[i] = std::max(umax[i], u[p.column(k)]);
      umin[i] = std::min(umin[i], u[p.column(k)]);
    }
  }

  LimiterOutput out{Method::Mc, std::vector<double>(p.nonzeros(), 1.0), SparseMatrix(a.pattern_ptr())};
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j <= i) continue;
      const int kt = p.transpose(k);
      const double dij = d.at(k);
      const double flux = dij * (u[j] - u[i]);
      double alpha = 0.0;
      if (flux != 0.0) {
        // 2 d_ij ubar_ij and 2 d_ij ubar_ji
        const double two_d_bar_ij = dij * (u[i] + u[j]) + a.at(k) * (u[j] - u[i]);
        const double two_d_bar_ji = dij * (u[j] + u[i]) + a.at(kt) * (u[i] - u[j]);
        double t1, t2;
        if (flux > 0.0) {
          t1 = (two_d_bar_ij - 2.0 * dij * umax[i]) / flux;
          t2 = (2.0 * dij * umin[j] - two_d_bar_ji) / flux;
        } else {
          t1 = (two_d_bar_ij - 2.0 * dij * umin[i]) / flux;
          t2 = (2.0 * dij * umax[j] - two_d_bar_ji) / flux;
        }
        alpha = std::clamp(std::min({1.0, t1, t2}), 0.0, 1.0);
      }
      out.factors[k] = out.factors[kt] = alpha;
      out.stabilization.at(k) = (1.0 - alpha) * dij;
      out.stabilization.at(kt) = (1.0 - alpha) * d.at(kt);
    }
  }
  close_rows(out.stabilization);
  return out;
}

LimiterOutput limiter_muas(const SparseMatrix& a, std::span<const double> u, const DofMap& dofs) {
  const SparsityPattern& p = a.pattern();
  const int n = p.size();
  std::vector<double> rp(n, 1.0), rm(n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (!dofs.is_dirichlet(i)) muas_row_factors(a, u, i, rp[i], rm[i]);
  }
  LimiterOutput out{Method::Muas, upwind_alpha(p, u, rp, rm), {}};
  out.stabilization = compose_upwind(a, out.factors);
  return out;
}

SmuasCache::SmuasCache(const Mesh& mesh, const DofMap& dofs, const SparsityPattern& pattern)
    : cell_(pattern.nonzeros(), -1),
      vertex_(pattern.nonzeros(), {0, 0, 0}),
      weight_(pattern.nonzeros(), {0.0, 0.0, 0.0}),
      muas_row_(pattern.size(), 0) {
  for (int i = 0; i < pattern.size(); ++i) {
    if (dofs.is_dirichlet(i)) continue;
    if (mesh.is_boundary_vertex(i)) muas_row_[i] = 1;
    for (int k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      const int j = pattern.column(k);
      if (j == i) continue;
      const Vec2 dir = mesh.vertex(i) - mesh.vertex(j);
      const auto c = ray_first_cell(mesh, i, dir);
      if (!c) {
        muas_row_[i] = 1;
        continue;
      }
      cell_[k] = *c;
      const CellGeometry geo = mesh.cell_geometry(*c);
      for (int m = 0; m < 3; ++m) {
        vertex_[k][m] = mesh.cell(*c)[m];
        weight_[k][m] = dot(geo.grad[m], dir);
      }
    }
  }
}

double SmuasCache::reflected_value(int k, int i, std::span<const double> u) const {
  const auto& v = vertex_[k];
  const auto& w = weight_[k];
  return u[i] + w[0] * u[v[0]] + w[1] * u[v[1]] + w[2] * u[v[2]];
}

LimiterOutput limiter_smuas(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                            const DofMap& dofs, const SmuasCache& cache) {
  const SparsityPattern& p = a.pattern();
  const int n = p.size();
  std::vector<double> rp(n, 1.0), rm(n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (dofs.is_dirichlet(i)) continue;
    if (cache.muas_row(i)) {
      muas_row_factors(a, u, i, rp[i], rm[i]);
      continue;
    }
    double pp = 0.0, pm = 0.0, qp = 0.0, qm = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i || a.at(k) == 0.0) continue;
      const double uij = cache.reflected_value(k, i, u);
      const double dd = std::abs(d.at(k));
      pp += dd * (pos(u[i] - u[j]) + pos(u[i] - uij));
      pm += dd * (neg(u[i] - u[j]) + neg(u[i] - uij));
      const double w = std::max(std::abs(a.at(k)), a.at(p.transpose(k)));
      qp += w * (pos(u[j] - u[i]) + pos(uij - u[i]));
      qm += w * (neg(u[j] - u[i]) + neg(uij - u[i]));
    }
    rp[i] = ratio_or_one(qp, pp);
    rm[i] = ratio_or_one(qm, pm);
  }
  LimiterOutput out{Method::Smuas, upwind_alpha(p, u, rp, rm), {}};
  out.stabilization = compose_upwind(a, out.factors);
  return out;
}

LimiterOutput limiter_bbk(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                          const DofMap& dofs, double exponent) {
  if (exponent < 1.0) throw std::invalid_argument("limiter_bbk: exponent must be >= 1");
  const SparsityPattern& p = a.pattern();
  const int n = p.size();
  std::vector<double> node(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (dofs.is_dirichlet(i)) continue;
    double num = 0.0, den = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i || a.at(k) == 0.0) continue;
      num += u[i] - u[j];
      den += std::abs(u[i] - u[j]);
    }
    node[i] = den != 0.0 ? std::abs(num) / den : 0.0;
  }
  LimiterOutput out{Method::Bbk, std::vector<double>(p.nonzeros(), 0.0), SparseMatrix(a.pattern_ptr())};
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j == i) continue;
      const double g = std::pow(std::max(node[i], node[j]), exponent);
      out.factors[k] = g;
      out.stabilization.at(k) = d.at(k) * g;
    }
  }
  close_rows(out.stabilization);
  return out;
}

std::vector<double> stabilization_action(const SparseMatrix& b, std::span<const double> v,
                                         const DofMap& dofs) {
  std::vector<double> r(b.size(), 0.0);
  for (int i = 0; i < b.size(); ++i)
    if (!dofs.is_dirichlet(i)) r[i] = b.row_dot(i, v);
  return r;
}

std::vector<double> afc_stabilization_action(std::span<const double> alpha, const SparseMatrix& d,
                                             std::span<const double> v, const DofMap& dofs) {
  const SparsityPattern& p = d.pattern();
  std::vector<double> r(p.size(), 0.0);
  for (int i = 0; i < p.size(); ++i) {
    if (dofs.is_dirichlet(i)) continue;
    double s = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.column(k);
      if (j != i) s += (1.0 - alpha[k]) * d.at(k) * (v[j] - v[i]);
    }
    r[i] = s;
  }
  return r;
}

Stabilizer::Stabilizer(const Mesh& mesh, const DofMap& dofs, Method method, double bbk_exponent)
    : dofs_(dofs), method_(method), bbk_exponent_(bbk_exponent) {
  if (method == Method::Bjk) gamma_ = compute_gamma_lp(mesh, dofs);
  if (method == Method::Smuas) smuas_.emplace(mesh, dofs, *make_pattern(mesh));
}

SparseMatrix Stabilizer::diffusion(const SparseMatrix& a) const {
  switch (method_) {
    case Method::None: return SparseMatrix(a.pattern_ptr());
    case Method::Bjk: return artificial_diffusion(bjk_preprocess(a, dofs_));
    default: return artificial_diffusion(a);
  }
}

LimiterOutput Stabilizer::limit(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u) const {
  switch (method_) {
    case Method::None:
      return {Method::None, std::vector<double>(a.pattern().nonzeros(), 1.0), SparseMatrix(a.pattern_ptr())};
    case Method::Bjk: return limiter_bjk(bjk_preprocess(a, dofs_), d, u, dofs_, gamma_);
    case Method::Mc: return limiter_mc(a, d, u, dofs_);
    case Method::Muas: return limiter_muas(a, u, dofs_);
    case Method::Smuas: return limiter_smuas(a, d, u, dofs_, *smuas_);
    case Method::Bbk: return limiter_bbk(a, d, u, dofs_, bbk_exponent_);
  }
  throw std::logic_error("Stabilizer: unknown method");
}

}  // namespace afc
