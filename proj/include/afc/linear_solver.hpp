#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "afc/sparse.hpp"

namespace afc {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sparse direct solver with a fill-reducing column ordering. The symbolic
// analysis is kept across factorizations as long as the pattern stays the
// same, so repeated solves with a fixed pattern only pay for the numeric
// factorization.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseMatrix& matrix);
  std::vector<double> solve(std::span<const double> rhs) const;
  bool factorized() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> linear_solve(const SparseMatrix& matrix, std::span<const double> rhs);

}  // namespace afc
