#pragma once

#include <memory>
#include <span>
#include <vector>

namespace afc {

class Mesh;

// Row-compressed sparsity pattern with sorted, unique column indices and a
// symmetric structure. Each stored position knows the position of its
// transpose, so (i,j)/(j,i) sweeps pair up in O(1).
class SparsityPattern {
 public:
  // rows[i] lists the columns of row i (the diagonal is added if missing).
  explicit SparsityPattern(const std::vector<std::vector<int>>& rows);

  int size() const { return static_cast<int>(offset_.size()) - 1; }
  int nonzeros() const { return static_cast<int>(column_.size()); }
  int row_begin(int i) const { return offset_[i]; }
  int row_end(int i) const { return offset_[i + 1]; }
  int column(int k) const { return column_[k]; }
  int diagonal(int i) const { return diagonal_[i]; }
  int transpose(int k) const { return transpose_[k]; }
  // Position of (i, j), or -1.
  int find(int i, int j) const;

  const std::vector<int>& offsets() const { return offset_; }
  const std::vector<int>& columns() const { return column_; }

 private:
  std::vector<int> offset_;
  std::vector<int> column_;
  std::vector<int> diagonal_;
  std::vector<int> transpose_;
};

// Vertex adjacency of the mesh plus the diagonal.
std::shared_ptr<const SparsityPattern> make_pattern(const Mesh& mesh);

class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
      : pattern_(std::move(pattern)), values_(pattern_->nonzeros(), 0.0) {}

  int size() const { return pattern_ ? pattern_->size() : 0; }
  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& at(int k) { return values_[k]; }
  double at(int k) const { return values_[k]; }
  // Value of entry (i, j); zero outside the pattern.
  double operator()(int i, int j) const;
  void add(int i, int j, double v);

  std::vector<double> multiply(std::span<const double> x) const;
  // y_i = sum_j m_ij x_j for a single row.
  double row_dot(int i, std::span<const double> x) const;

  SparseMatrix& operator+=(const SparseMatrix& other);
  friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) { return a += b; }

  // Replaces row i by the identity row.
  void set_identity_row(int i);

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

}  // namespace afc
