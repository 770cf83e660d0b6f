#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pslr/dense.hpp"

namespace pslr {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Row-compressed sparse matrix of doubles.
///
/// Immutable once constructed. Column indices inside a row are strictly
/// increasing and there are no duplicate entries; every constructor
/// enforces this.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}

  /// Takes ownership of raw CSR arrays and validates them.
  SparseMatrix(Index rows, Index cols, std::vector<std::size_t> row_ptr,
               std::vector<Index> col_idx, std::vector<double> values);

  /// Builds from coordinate entries in any order. Duplicates are summed.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::span<const Triplet> entries);
  static SparseMatrix identity(Index n);
  static SparseMatrix zeros(Index rows, Index cols);
  static SparseMatrix from_dense(const DenseMatrix& dense, double drop = 0.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const noexcept {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(Index i) const noexcept {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// Entry lookup by binary search; 0 for structural zeros.
  double at(Index i, Index j) const;

  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;

  bool is_square() const noexcept { return rows_ == cols_; }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Bijection on {0..n-1}. forward maps an old index to its new position.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> forward);

  static Permutation identity(Index n);

  Index size() const noexcept { return static_cast<Index>(forward_.size()); }
  Index operator()(Index old_index) const { return forward_[old_index]; }
  Index inverse(Index new_index) const { return inverse_[new_index]; }

  std::span<const Index> forward() const noexcept { return forward_; }
  std::span<const Index> inverse_map() const noexcept { return inverse_; }

  Permutation inverted() const;

  /// out[p(i)] = v[i]
  Vector apply(const Vector& v) const;
  /// out[i] = v[p(i)]
  Vector apply_inverse(const Vector& v) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

/// y = A x. Row sums accumulate in column order so results do not depend on
/// the number of threads.
Vector matvec(const SparseMatrix& a, const Vector& x);
void matvec(const SparseMatrix& a, std::span<const double> x,
            std::span<double> y);
/// y += alpha * A x
void matvec_add(const SparseMatrix& a, std::span<const double> x,
                std::span<double> y, double alpha = 1.0);

/// result[p(i), p(j)] = A[i, j]
SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p);

/// result[a, b] = A[rows[a], cols[b]]. Index sets must be sorted and in range.
SparseMatrix extract_submatrix(const SparseMatrix& a, std::span<const Index> rows,
                               std::span<const Index> cols);

/// Contiguous [row_begin, row_end) x [col_begin, col_end) block.
SparseMatrix extract_block(const SparseMatrix& a, Index row_begin, Index row_end,
                           Index col_begin, Index col_end);

/// A - B for matrices of equal shape. Exact cancellations are kept out of
/// the result pattern.
SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b);

double frobenius_norm(const SparseMatrix& a);

}  // namespace pslr
