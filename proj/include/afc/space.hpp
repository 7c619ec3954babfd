#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "afc/geometry.hpp"
#include "afc/mesh.hpp"
#include "afc/sparse.hpp"

namespace afc {

using ScalarField = std::function<double(double x, double y)>;
// Convection may depend on the solution value (nonlinear problems).
using ConvectionField = std::function<Vec2(double x, double y, double u)>;
using GradientField = std::function<Vec2(double x, double y)>;

// -eps Lap u + b . grad u + c u = f with Dirichlet data on Gamma_D and
// eps grad u . n = u_N on Gamma_N.
struct ProblemDefinition {
  double epsilon = 1.0;
  ConvectionField convection = [](double, double, double) { return Vec2{}; };
  ScalarField reaction = [](double, double) { return 0.0; };
  ScalarField source = [](double, double) { return 0.0; };
  // Lower bound of c - div(b)/2; zero when only eps controls the energy norm.
  double sigma = 0.0;
  ScalarField dirichlet = [](double, double) { return 0.0; };
  ScalarField neumann = [](double, double) { return 0.0; };
  ScalarField exact;  // optional
  GradientField exact_gradient;  // optional
  bool nonlinear = false;

  bool has_exact() const { return static_cast<bool>(exact) && static_cast<bool>(exact_gradient); }
};

// P1 degrees of freedom coincide with mesh vertices.
struct DofMap {
  std::vector<std::uint8_t> dirichlet;  // per node
  int free_count = 0;

  int size() const { return static_cast<int>(dirichlet.size()); }
  bool is_dirichlet(int i) const { return dirichlet[i] != 0; }
};

DofMap make_dofs(const Mesh& mesh);

struct GalerkinSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

// A_ij = eps (grad phi_j, grad phi_i) + (b . grad phi_j, phi_i) + (c phi_j, phi_i),
// F_i = (f, phi_i) + <u_N, phi_i>_{Gamma_N}. Dirichlet rows are left untouched.
// For nonlinear problems the convection is evaluated at u_prev.
GalerkinSystem assemble_galerkin(const Mesh& mesh, const ProblemDefinition& problem,
                                 std::span<const double> u_prev = {},
                                 std::shared_ptr<const SparsityPattern> pattern = nullptr);

std::vector<double> dirichlet_values(const Mesh& mesh, const DofMap& dofs,
                                     const ProblemDefinition& problem);

// Overwrites Dirichlet rows with identity rows and sets F_i = u_D(x_i).
void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, const DofMap& dofs,
                     std::span<const double> values);

// Nodal vector with Dirichlet values injected and zero elsewhere.
std::vector<double> initial_guess(const DofMap& dofs, std::span<const double> dirichlet);

std::optional<double> evaluate_fe(const Mesh& mesh, const PointLocator& locator,
                                  std::span<const double> u, Point2 p);
// Throws when p is outside the domain.
double evaluate_fe(const Mesh& mesh, std::span<const double> u, Point2 p);

}  // namespace afc
