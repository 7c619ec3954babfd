#include "afc/nlsolve.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "afc/linear_solver.hpp"

namespace afc {

DampingResult damping_step(std::span<const double> u_prev, std::span<const double> u_tilde,
                           double residual_prev, double residual_new, DampingState state,
                           const SolverConfig& config) {
  DampingResult r;
  if (residual_new <= residual_prev) {
    r.u_next.resize(u_prev.size());
    for (std::size_t i = 0; i < u_prev.size(); ++i)
      r.u_next[i] = u_prev[i] + state.omega * (u_tilde[i] - u_prev[i]);
    r.accepted = true;
    if (++state.consecutive_accepts >= config.grow_after) {
      state.omega = std::min(1.0, state.omega * config.omega_grow);
      state.consecutive_accepts = 0;
    }
  } else {
    r.u_next.assign(u_prev.begin(), u_prev.end());
    state.omega *= config.omega_shrink;
    state.consecutive_accepts = 0;
    r.aborted = state.omega < config.omega_min;
  }
  r.state = state;
  return r;
}

SolveReport damped_fixed_point(FixedPointOperator& op, std::vector<double>& u, double tolerance,
                               const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.tolerance = tolerance;
  double res = op.residual(u);
  op.accept();
  DampingState state{config.omega_init, 0};
  int trials = 0;
  std::vector<double> trial(u.size());

  while (res > tolerance && trials < config.max_iterations && rep.failure.empty()) {
    const std::vector<double> ut = op.propose(u);
    while (trials < config.max_iterations) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + state.omega * (ut[i] - u[i]);
      const double res_new = op.residual(trial);
      ++trials;
      DampingResult d = damping_step(u, ut, res, res_new, state, config);
      state = d.state;
      if (d.accepted) {
        u = std::move(d.u_next);
        res = res_new;
        op.accept();
        ++rep.iterations;
        break;
      }
      ++rep.rejections;
      if (d.aborted) {
        rep.failure = "damping parameter fell below omega_min";
        break;
      }
    }
  }
  if (res > tolerance && rep.failure.empty()) rep.failure = "iteration limit reached";
  // A rejected trial may have left a stale pending state behind.
  if (rep.rejections > 0) {
    op.residual(u);
    op.accept();
  }
  rep.final_residual = res;
  rep.converged = res <= tolerance;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

double free_residual(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> rhs,
                     std::span<const double> u, const DofMap& dofs) {
  double s = 0.0;
  for (int i = 0; i < dofs.size(); ++i) {
    if (dofs.is_dirichlet(i)) continue;
    const double r = a.row_dot(i, u) + b.row_dot(i, u) - rhs[i];
    s += r * r;
  }
  return std::sqrt(s);
}

namespace {

double tolerance_for(const SolverConfig& config, const DofMap& dofs) {
  return config.residual_factor * std::sqrt(static_cast<double>(dofs.size()));
}

void check_initial(const Mesh& mesh, const std::vector<double>& u0) {
  if (u0.size() != mesh.num_vertices()) throw std::invalid_argument("solver: initial guess has the wrong size");
}

class LinearOperator final : public FixedPointOperator {
 public:
  LinearOperator(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem, Method method,
                 double bbk_exponent)
      : dofs_(dofs), stab_(mesh, dofs, method, bbk_exponent) {
    GalerkinSystem sys = assemble_galerkin(mesh, problem);
    a_ = std::move(sys.matrix);
    rhs_ = std::move(sys.rhs);
    d_ = stab_.diffusion(a_);
    g_ = dirichlet_values(mesh, dofs, problem);
    SparseMatrix system = a_ + d_;
    std::vector<double> dummy(rhs_);
    apply_dirichlet(system, dummy, dofs, g_);
    solver_.factorize(system);
  }

  double residual(std::span<const double> u) override {
    pending_ = stab_.limit(a_, d_, u);
    return free_residual(a_, pending_.stabilization, rhs_, u, dofs_);
  }
  void accept() override { current_ = pending_; }
  std::vector<double> propose(std::span<const double> u) override {
    const std::vector<double> du = d_.multiply(u);
    const std::vector<double> bu = current_.stabilization.multiply(u);
    std::vector<double> rhs(rhs_.size());
    for (int i = 0; i < dofs_.size(); ++i) rhs[i] = dofs_.is_dirichlet(i) ? g_[i] : rhs_[i] + du[i] - bu[i];
    return solver_.solve(rhs);
  }
  LimiterOutput& current() { return current_; }

 private:
  const DofMap& dofs_;
  Stabilizer stab_;
  SparseMatrix a_, d_;
  std::vector<double> rhs_, g_;
  LinearSolver solver_;
  LimiterOutput pending_, current_;
};

class NonlinearOperator final : public FixedPointOperator {
 public:
  NonlinearOperator(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem, Method method,
                    double bbk_exponent)
      : mesh_(mesh), dofs_(dofs), problem_(problem), stab_(mesh, dofs, method, bbk_exponent),
        pattern_(make_pattern(mesh)) {
    g_ = dirichlet_values(mesh, dofs, problem);
  }

  double residual(std::span<const double> u) override {
    pending_sys_ = assemble_galerkin(mesh_, problem_, u, pattern_);
    const SparseMatrix d = stab_.diffusion(pending_sys_.matrix);
    pending_ = stab_.limit(pending_sys_.matrix, d, u);
    return free_residual(pending_sys_.matrix, pending_.stabilization, pending_sys_.rhs, u, dofs_);
  }
  void accept() override {
    current_sys_ = pending_sys_;
    current_ = pending_;
  }
  std::vector<double> propose(std::span<const double>) override {
    SparseMatrix system = current_sys_.matrix + current_.stabilization;
    std::vector<double> rhs = current_sys_.rhs;
    apply_dirichlet(system, rhs, dofs_, g_);
    if (!solver_) solver_.emplace();
    solver_->factorize(system);
    return solver_->solve(rhs);
  }
  LimiterOutput& current() { return current_; }

 private:
  const Mesh& mesh_;
  const DofMap& dofs_;
  const ProblemDefinition& problem_;
  Stabilizer stab_;
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> g_;
  std::optional<LinearSolver> solver_;
  GalerkinSystem pending_sys_, current_sys_;
  LimiterOutput pending_, current_;
};

}  // namespace

SolveResult solve_linear_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                 Method method, const SolverConfig& config, std::vector<double> u0) {
  if (problem.nonlinear) throw std::invalid_argument("solve_linear_problem: problem is nonlinear");
  check_initial(mesh, u0);
  const auto start = std::chrono::steady_clock::now();
  LinearOperator op(mesh, dofs, problem, method, config.bbk_exponent);
  SolveResult out;
  out.u = std::move(u0);
  out.report = damped_fixed_point(op, out.u, tolerance_for(config, dofs), config);
  out.limiter = std::move(op.current());
  out.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolveResult solve_nonlinear_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                    Method method, const SolverConfig& config, std::vector<double> u0) {
  if (!problem.nonlinear) throw std::invalid_argument("solve_nonlinear_problem: problem is linear");
  check_initial(mesh, u0);
  const auto start = std::chrono::steady_clock::now();
  NonlinearOperator op(mesh, dofs, problem, method, config.bbk_exponent);
  SolveResult out;
  out.u = std::move(u0);
  out.report = damped_fixed_point(op, out.u, tolerance_for(config, dofs), config);
  out.limiter = std::move(op.current());
  out.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolveResult solve_problem(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                          Method method, const SolverConfig& config, std::vector<double> u0) {
  return problem.nonlinear ? solve_nonlinear_problem(mesh, dofs, problem, method, config, std::move(u0))
                           : solve_linear_problem(mesh, dofs, problem, method, config, std::move(u0));
}

}  // namespace afc
