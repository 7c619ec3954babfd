#pragma once

#include <span>
#include <string>
#include <vector>

#include "afc/mesh.hpp"
#include "afc/space.hpp"
#include "afc/stabilize.hpp"

namespace afc {

struct SolverConfig {
  double residual_factor = 1e-8;  // tolerance = residual_factor * sqrt(#dofs)
  int max_iterations = 10000;     // iterations plus rejections
  double omega_init = 1.0;
  double omega_shrink = 0.5;
  double omega_grow = 1.2;
  int grow_after = 5;
  double omega_min = 1e-8;
  double bbk_exponent = 10.0;  // p in gamma_ij = max(alpha_i, alpha_j)^p
};

struct SolveReport {
  int iterations = 0;
  int rejections = 0;
  double final_residual = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  double wall_time = 0.0;
  std::string failure;  // empty on success
};

struct DampingState {
  double omega = 1.0;
  int consecutive_accepts = 0;
};

struct DampingResult {
  std::vector<double> u_next;
  DampingState state;
  bool accepted = false;
  bool aborted = false;  // omega fell below config.omega_min
};

// One decision of the monotone-residual controller. residual_new is the
// residual of u_prev + omega (u_tilde - u_prev) for the incoming omega.
DampingResult damping_step(std::span<const double> u_prev, std::span<const double> u_tilde,
                           double residual_prev, double residual_new, DampingState state,
                           const SolverConfig& config);

// Operator seen by the damped fixed-point loop.
class FixedPointOperator {
 public:
  virtual ~FixedPointOperator() = default;
  // Residual norm at u. Leaves u as the pending state.
  virtual double residual(std::span<const double> u) = 0;
  // Promotes the pending state to the current one.
  virtual void accept() = 0;
  // Undamped update from the current state.
  virtual std::vector<double> propose(std::span<const double> u) = 0;
};

SolveReport damped_fixed_point(FixedPointOperator& op, std::vector<double>& u, double tolerance,
                               const SolverConfig& config);

struct SolveResult {
  std::vector<double> u;
  SolveReport report;
  LimiterOutput limiter;  // B(u) at the returned iterate
};

// Constant-matrix iteration (A + D) u~ = F + (D - B(U)) U.
SolveResult solve_linear_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                 Method method, const SolverConfig& config, std::vector<double> u0);
// Fixed-point matrix iteration (A(U) + B(U)) u~ = F.
SolveResult solve_nonlinear_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                    Method method, const SolverConfig& config, std::vector<double> u0);
// Dispatches on problem.nonlinear.
SolveResult solve_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                          Method method, const SolverConfig& config, std::vector<double> u0);

// || (A + B) u - F || over free nodes.
double free_residual(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> rhs,
                     std::span<const double> u, const DofMap& dofs);

}  // namespace afc
