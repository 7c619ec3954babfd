#include "afc/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "afc/metrics.hpp"

namespace afc {

MarkingResult mark_cells(std::span<const double> eta, const MarkingConfig& config) {
  if (!(config.relax > 0.0 && config.relax < 1.0)) throw std::invalid_argument("mark_cells: relax must lie in (0,1)");
  MarkingResult out;
  if (eta.empty()) return out;
  const double eta_max = *std::max_element(eta.begin(), eta.end());
  if (!(eta_max > 0.0)) return out;

  const double wanted = config.min_ref * static_cast<double>(eta.size());
  double t = config.ref_tol;
  while (true) {
    ++out.passes;
    out.cells.clear();
    for (int k = 0; k < static_cast<int>(eta.size()); ++k)
      if (eta[k] >= t * eta_max) out.cells.push_back(k);
    out.threshold = t;
    if (static_cast<double>(out.cells.size()) >= wanted || out.cells.size() == eta.size()) break;
    t *= config.relax;
    // Once t underflows every nonnegative indicator passes the test.
    if (t == 0.0) {
      out.cells.resize(eta.size());
      for (int k = 0; k < static_cast<int>(eta.size()); ++k) out.cells[k] = k;
      out.threshold = 0.0;
      break;
    }
  }
  return out;
}

std::optional<double> LevelRecord::effectivity() const {
  if (!error || !(error->energy > 0.0)) return std::nullopt;
  return eta / error->energy;
}

bool AdaptiveTrace::all_converged() const {
  return std::all_of(levels.begin(), levels.end(), [](const LevelRecord& r) { return r.solve.converged; });
}

std::vector<double> transfer_solution(const Mesh& coarse, std::span<const double> u, const Mesh& fine,
                                      const DofMap& fine_dofs, const ProblemDefinition& problem) {
  if (u.size() != coarse.num_vertices()) throw std::invalid_argument("transfer_solution: size mismatch");
  std::vector<double> out(fine.num_vertices(), 0.0);
  std::copy(u.begin(), u.end(), out.begin());
  for (int v = static_cast<int>(coarse.num_vertices()); v < static_cast<int>(fine.num_vertices()); ++v) {
    const auto& parent = fine.vertex_parent(v);
    if (parent[0] < 0 || parent[0] >= v || parent[1] >= v)
      throw std::logic_error("transfer_solution: vertex without an older parent edge");
    out[v] = 0.5 * (out[parent[0]] + out[parent[1]]);
  }
  for (int i = 0; i < fine_dofs.size(); ++i)
    if (fine_dofs.is_dirichlet(i)) out[i] = problem.dirichlet(fine.vertex(i).x, fine.vertex(i).y);
  return out;
}

AdaptiveTrace run_adaptive(const BenchmarkCase& benchmark, GridId grid, Method method,
                           const AdaptiveConfig& config, const LevelCallback& on_level) {
  const ProblemDefinition& problem = benchmark.problem;
  AdaptiveTrace trace;
  std::vector<double> u;  // solution on the previous mesh
  Mesh previous;
  bool have_previous = false;
  const int uniform = std::max(0, config.marking.initial_uniform_steps);

  // Uniform levels 1..uniform are solved and recorded; the root only when
  // no uniform steps are requested.
  Mesh mesh = make_root_grid(grid, benchmark.boundary);
  int level = 0;
  if (uniform > 0) {
    mesh = refine_uniform(mesh);
    level = 1;
  }

  while (true) {
    const DofMap dofs = make_dofs(mesh);
    std::vector<double> u0 = have_previous ? transfer_solution(previous, u, mesh, dofs, problem)
                                           : initial_guess(dofs, dirichlet_values(mesh, dofs, problem));

    const auto start = std::chrono::steady_clock::now();
    SolveResult solved = solve_problem(mesh, dofs, problem, method, config.solver, std::move(u0));
    const EstimateBreakdown est = assemble_estimate(mesh, dofs, problem, solved.u, solved.limiter, config.constants);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    LevelRecord rec;
    rec.level = level;
    rec.dofs = static_cast<long>(mesh.num_vertices());
    rec.cells = static_cast<long>(mesh.num_cells());
    rec.eta = est.eta();
    rec.eta1 = est.eta1();
    rec.eta2 = est.eta2();
    rec.eta3 = est.eta3();
    if (problem.has_exact()) rec.error = energy_norm_error(mesh, problem, solved.u);
    rec.osc = osc_metric(solved.u);
    if (benchmark.smear_reference && !benchmark.cutlines.empty()) {
      const Cutline& cut = benchmark.cutlines.front();
      rec.smear = smear_metric(cutline_sample(mesh, solved.u, cut.from, cut.to, config.cutline_intervals));
    }
    rec.solve = solved.report;
    rec.seconds = seconds;

    const bool uniform_phase = level < uniform;
    const bool budget_hit = !uniform_phase && rec.dofs >= config.marking.dof_budget;
    std::vector<int> marked;
    if (!uniform_phase && !budget_hit) {
      marked = mark_cells(cell_indicators(mesh, est), config.marking).cells;
      rec.marked = static_cast<long>(marked.size());
    } else if (uniform_phase) {
      rec.marked = rec.cells;
    }

    trace.levels.push_back(rec);
    if (config.keep_snapshots) trace.snapshots.push_back({level, mesh, solved.u});
    if (on_level) on_level(LevelView{trace.levels.back(), mesh, solved.u});

    if (budget_hit || (!uniform_phase && marked.empty())) {
      trace.final_mesh = std::move(mesh);
      trace.final_solution = std::move(solved.u);
      break;
    }
    Mesh next = uniform_phase ? refine_uniform(mesh) : refine_red_green(mesh, marked);
    previous = std::move(mesh);
    mesh = std::move(next);
    u = std::move(solved.u);
    have_previous = true;
    ++level;
  }
  return trace;
}

}  // namespace afc
