#include "afc/sparse.hpp"

#include <algorithm>
#include <stdexcept>

#include "afc/mesh.hpp"

namespace afc {

SparsityPattern::SparsityPattern(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> r = rows[i];
    r.push_back(i);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    for (int j : r) {
      if (j < 0 || j >= n) throw std::invalid_argument("SparsityPattern: column out of range");
    }
    column_.insert(column_.end(), r.begin(), r.end());
    offset_[i + 1] = static_cast<int>(column_.size());
  }
  diagonal_.resize(n);
  for (int i = 0; i < n; ++i) diagonal_[i] = find(i, i);
  transpose_.resize(column_.size());
  for (int i = 0; i < n; ++i) {
    for (int k = offset_[i]; k < offset_[i + 1]; ++k) {
      const int t = find(column_[k], i);
      if (t < 0) throw std::invalid_argument("SparsityPattern: structure is not symmetric");
      transpose_[k] = t;
    }
  }
}

int SparsityPattern::find(int i, int j) const {
  const auto first = column_.begin() + offset_[i];
  const auto last = column_.begin() + offset_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return static_cast<int>(it - column_.begin());
}

std::shared_ptr<const SparsityPattern> make_pattern(const Mesh& mesh) {
  std::vector<std::vector<int>> rows(mesh.num_vertices());
  for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
    const auto nb = mesh.vertex_neighbors(v);
    rows[v].assign(nb.begin(), nb.end());
  }
  return std::make_shared<const SparsityPattern>(rows);
}

double SparseMatrix::operator()(int i, int j) const {
  const int k = pattern_->find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::add(int i, int j, double v) {
  const int k = pattern_->find(i, j);
  if (k < 0) throw std::out_of_range("SparseMatrix::add: entry outside the pattern");
  values_[k] += v;
}

double SparseMatrix::row_dot(int i, std::span<const double> x) const {
  const auto& p = *pattern_;
  double s = 0.0;
  for (int k = p.row_begin(i); k < p.row_end(i); ++k) s += values_[k] * x[p.column(k)];
  return s;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(size());
  for (int i = 0; i < size(); ++i) y[i] = row_dot(i, x);
  return y;
}

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& other) {
  if (pattern_ != other.pattern_) throw std::invalid_argument("SparseMatrix: patterns differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

void SparseMatrix::set_identity_row(int i) {
  for (int k = pattern_->row_begin(i); k < pattern_->row_end(i); ++k) values_[k] = 0.0;
  values_[pattern_->diagonal(i)] = 1.0;
}

}  // namespace afc
