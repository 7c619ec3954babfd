#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "afc/mesh.hpp"
#include "afc/space.hpp"
#include "afc/stabilize.hpp"

namespace afc {

class EstimatorError : public std::runtime_error {
 public:
  EstimatorError(const std::string& what, int cell) : std::runtime_error(what), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

struct EstimatorConstants {
  double c_interp = 1.0;  // C_I
  double c_face = 1.0;    // C_F
  double c_generic = 1.0; // C
  double c_inverse = 1.0; // C_inv

  double kappa1(double edge_max) const {
    return c_generic * edge_max * (1.0 + (1.0 + c_interp) * (1.0 + c_interp));
  }
  double kappa2(double edge_max) const {
    return c_generic * c_inverse * c_inverse * edge_max * (1.0 + (1.0 + c_interp) * (1.0 + c_interp));
  }
};

// 4 sqrt(2) (1 + sqrt(2)) |K| / (1 - C_cos rho_K^3) with C_cos the largest
// cosine of the three angles. Throws EstimatorError when the denominator is
// not positive.
double edge_constant(const CellGeometry& cell, int cell_id = -1);

// ||f - b . grad u_h - c u_h||_{0,K}.
double element_residual(const Mesh& mesh, int cell, const ProblemDefinition& problem,
                        std::span<const double> u);
// ||R_F||_{0,F} for edge e (interior jump, Neumann defect, or 0 on Dirichlet sides).
double face_residual(const Mesh& mesh, int edge, const ProblemDefinition& problem,
                     std::span<const double> u);

struct EstimateBreakdown {
  std::vector<double> eta1_sq;  // per cell
  std::vector<double> eta2_sq;  // per edge (faces)
  std::vector<double> eta3_sq;  // per edge
  double eta1_total = 0.0;      // squared totals
  double eta2_total = 0.0;
  double eta3_total = 0.0;

  double eta() const;
  double eta1() const;
  double eta2() const;
  double eta3() const;
};

EstimateBreakdown assemble_estimate(const Mesh& mesh, const DofMap& dofs, const ProblemDefinition& problem,
                                    std::span<const double> u, const LimiterOutput& limiter,
                                    const EstimatorConstants& constants = {});

// Per-cell indicators eta_K: own eta_1^2 plus each adjacent edge's eta_2^2 and
// eta_3^2 shared equally between the cells on that edge.
std::vector<double> cell_indicators(const Mesh& mesh, const EstimateBreakdown& est);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double energy = 0.0;
};

ErrorNorms energy_norm_error(const Mesh& mesh, const ProblemDefinition& problem, std::span<const double> u);

}  // namespace afc
