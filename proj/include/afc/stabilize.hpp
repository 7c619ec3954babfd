#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "afc/mesh.hpp"
#include "afc/space.hpp"
#include "afc/sparse.hpp"

namespace afc {

enum class Method { None, Bjk, Mc, Muas, Smuas, Bbk };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::Bjk, Method::Mc, Method::Muas, Method::Smuas, Method::Bbk};

struct LimiterOutput {
  Method method = Method::None;
  // Per stored position of the pattern: alpha_ij, or gamma_ij for BBK.
  std::vector<double> factors;
  // B(u): nonpositive off-diagonals, zero row sums.
  SparseMatrix stabilization;

  // |b_E| for the edge (i, j): max(|b_ij|, |b_ji|).
  double edge_weight(int i, int j) const;
};

// d_ij = -max(a_ij, 0, a_ji) for i != j, d_ii = -sum_{j != i} d_ij.
SparseMatrix artificial_diffusion(const SparseMatrix& a);

// Working copy of A with a_ji := 0 whenever a_ij < 0 for free i and Dirichlet j.
SparseMatrix bjk_preprocess(const SparseMatrix& a, const DofMap& dofs);

// Linearity-preserving BJK constants: for an interior node, the largest
// distance to a neighbour divided by the distance from x_i to the boundary
// of the convex hull of its neighbours; 1 on the boundary and for
// degenerate hulls.
std::vector<double> compute_gamma_lp(const Mesh& mesh, const DofMap& dofs);

LimiterOutput limiter_bjk(const SparseMatrix& a_pre, const SparseMatrix& d, std::span<const double> u,
                          const DofMap& dofs, std::span<const double> gamma);
LimiterOutput limiter_mc(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                         const DofMap& dofs);
LimiterOutput limiter_muas(const SparseMatrix& a, std::span<const double> u, const DofMap& dofs);

// Per-mesh data for SMUAS: for each stored position (i, j) the cell hit by
// the half line x_i + t (x_i - x_j), t > 0, reduced to the weights that turn
// nodal values into grad(u_h)|_K . (x_i - x_j).
class SmuasCache {
 public:
  SmuasCache(const Mesh& mesh, const DofMap& dofs, const SparsityPattern& pattern);

  // Rows evaluated with the MUAS formula: Neumann nodes, and rows where some
  // reflected ray leaves the domain.
  bool muas_row(int i) const { return muas_row_[i] != 0; }
  int cell(int k) const { return cell_[k]; }
  // u_ij = u_i + sum_m weight(k, m) u[vertex(k, m)]
  double reflected_value(int k, int i, std::span<const double> u) const;
  std::size_t positions() const { return cell_.size(); }

 private:
  std::vector<int> cell_;
  std::vector<std::array<int, 3>> vertex_;
  std::vector<std::array<double, 3>> weight_;
  std::vector<std::uint8_t> muas_row_;
};

LimiterOutput limiter_smuas(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                            const DofMap& dofs, const SmuasCache& cache);
LimiterOutput limiter_bbk(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u,
                          const DofMap& dofs, double p = 10.0);

// (B v)_i on free nodes, zero on Dirichlet nodes.
std::vector<double> stabilization_action(const SparseMatrix& b, std::span<const double> v,
                                         const DofMap& dofs);
// sum_j (1 - alpha_ij) d_ij (v_j - v_i) on free nodes.
std::vector<double> afc_stabilization_action(std::span<const double> alpha, const SparseMatrix& d,
                                             std::span<const double> v, const DofMap& dofs);

// Method-specific state for one mesh: gamma constants for BJK, ray cache for
// SMUAS, and the exponent for BBK.
class Stabilizer {
 public:
  Stabilizer(const Mesh& mesh, const DofMap& dofs, Method method, double bbk_exponent = 10.0);

  Method method() const { return method_; }
  // Artificial diffusion used by the method (BJK: of the preprocessed matrix;
  // None: zero).
  SparseMatrix diffusion(const SparseMatrix& a) const;
  LimiterOutput limit(const SparseMatrix& a, const SparseMatrix& d, std::span<const double> u) const;

 private:
  DofMap dofs_;
  Method method_;
  double bbk_exponent_;
  std::vector<double> gamma_;
  std::optional<SmuasCache> smuas_;
};

}  // namespace afc
