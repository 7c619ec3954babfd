#include "afc/linear_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace afc {

struct LinearSolver::Impl {
  using Matrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>> lu;
  const SparsityPattern* analyzed = nullptr;
  bool ready = false;
  int n = 0;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseMatrix& matrix) {
  const SparsityPattern& p = matrix.pattern();
  const int n = p.size();
  // CSR of A is CSC of A^T; build A column-major explicitly.
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(p.nonzeros());
  for (int i = 0; i < n; ++i)
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) triplets.emplace_back(i, p.column(k), matrix.at(k));
  Impl::Matrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  if (impl_->analyzed != &p || impl_->n != n) {
    impl_->lu.analyzePattern(a);
    impl_->analyzed = &p;
    impl_->n = n;
  }
  impl_->lu.factorize(a);
  impl_->ready = impl_->lu.info() == Eigen::Success;
  if (!impl_->ready) throw SingularMatrixError("LinearSolver: factorization failed: " + impl_->lu.lastErrorMessage());
}

std::vector<double> LinearSolver::solve(std::span<const double> rhs) const {
  if (!impl_->ready) throw std::logic_error("LinearSolver: solve before factorize");
  if (static_cast<int>(rhs.size()) != impl_->n) throw std::invalid_argument("LinearSolver: size mismatch");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), impl_->n);
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success) throw SingularMatrixError("LinearSolver: solve failed");
  return std::vector<double>(x.data(), x.data() + x.size());
}

bool LinearSolver::factorized() const { return impl_->ready; }

std::vector<double> linear_solve(const SparseMatrix& matrix, std::span<const double> rhs) {
  LinearSolver solver;
  solver.factorize(matrix);
  return solver.solve(rhs);
}

}  // namespace afc
