#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "afc/estimate.hpp"
#include "afc/mesh.hpp"
#include "afc/nlsolve.hpp"
#include "afc/problems.hpp"
#include "afc/stabilize.hpp"

namespace afc {

struct MarkingConfig {
  double ref_tol = 0.5;
  double min_ref = 0.05;
  double relax = 0.8;
  long dof_budget = 250000;
  int initial_uniform_steps = 2;
};

struct MarkingResult {
  std::vector<int> cells;
  double threshold = 0.0;  // final t, marking eta_K >= t * eta_max
  int passes = 0;
};

MarkingResult mark_cells(std::span<const double> eta, const MarkingConfig& config);

struct LevelRecord {
  int level = 0;
  long dofs = 0;
  long cells = 0;
  double eta = 0.0, eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
  std::optional<ErrorNorms> error;
  std::optional<double> smear;
  double osc = 0.0;
  SolveReport solve;
  long marked = 0;
  double seconds = 0.0;  // solve + estimate

  std::optional<double> effectivity() const;
};

struct LevelSnapshot {
  int level = 0;
  Mesh mesh;
  std::vector<double> solution;
};

struct AdaptiveTrace {
  std::vector<LevelRecord> levels;
  std::vector<LevelSnapshot> snapshots;  // filled when AdaptiveConfig::keep_snapshots is set
  Mesh final_mesh;
  std::vector<double> final_solution;

  bool all_converged() const;
};

struct AdaptiveConfig {
  MarkingConfig marking;
  SolverConfig solver;
  EstimatorConstants constants;
  int cutline_intervals = 100000;
  bool keep_snapshots = false;
};

// Everything known about one level when it is recorded.
struct LevelView {
  const LevelRecord& record;
  const Mesh& mesh;
  std::span<const double> solution;
};

using LevelCallback = std::function<void(const LevelView&)>;

// Nodal interpolation of u (given on `coarse`) onto `fine`, which keeps the
// coarse vertex ids and adds edge midpoints. Dirichlet values are injected.
std::vector<double> transfer_solution(const Mesh& coarse, std::span<const double> u, const Mesh& fine,
                                      const DofMap& fine_dofs, const ProblemDefinition& problem);

AdaptiveTrace run_adaptive(const BenchmarkCase& benchmark, GridId grid, Method method,
                           const AdaptiveConfig& config, const LevelCallback& on_level = nullptr);

}  // namespace afc
