#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pslr/sparse.hpp"

namespace pslr {

struct IluOptions {
  /// Off-diagonal entries below droptol * ||row||_2 are dropped. 0 gives exact LU.
  double droptol = 1e-2;
  /// Largest entries kept per row in each of L and U; unlimited when empty.
  std::optional<Index> max_fill_per_row;
};

/// L U ~= A with L unit lower triangular and U upper triangular.
class IluFactor {
 public:
  IluFactor() = default;
  IluFactor(SparseMatrix lower, SparseMatrix upper, std::vector<double> diag,
            std::size_t pivot_repairs, std::size_t zero_rows);

  Index size() const noexcept { return static_cast<Index>(diag_.size()); }

  /// Strictly lower part of L (the unit diagonal is implicit).
  const SparseMatrix& lower() const noexcept { return lower_; }
  /// Strictly upper part of U.
  const SparseMatrix& upper() const noexcept { return upper_; }
  std::span<const double> diagonal() const noexcept { return diag_; }

  /// Nonzeros of L and U as stored matrices; both count their diagonal.
  std::size_t nnz_l() const noexcept { return lower_.nnz() + diag_.size(); }
  std::size_t nnz_u() const noexcept { return upper_.nnz() + diag_.size(); }

  std::size_t pivot_repairs() const noexcept { return pivot_repairs_; }
  std::size_t zero_rows() const noexcept { return zero_rows_; }

  /// Overwrites x with U^{-1} L^{-1} x.
  void solve_in_place(std::span<double> x) const;

  DenseMatrix dense_l() const;
  DenseMatrix dense_u() const;

 private:
  SparseMatrix lower_;
  SparseMatrix upper_;
  std::vector<double> diag_;
  std::size_t pivot_repairs_ = 0;
  std::size_t zero_rows_ = 0;
};

/// Row-wise (IKJ) threshold ILU. Never throws on breakdown: an absent or zero
/// pivot is replaced by droptol * ||row||_2 carrying the sign of the original
/// diagonal, and the repair is counted.
IluFactor ilut(const SparseMatrix& a, const IluOptions& opts = {});

/// Independent factors of the diagonal blocks of a block-diagonal operator.
class BlockIlu {
 public:
  BlockIlu() : offsets_(1, 0) {}
  BlockIlu(std::vector<IluFactor> factors);

  /// Factors every block; blocks are processed in parallel.
  static BlockIlu factor(std::span<const SparseMatrix> blocks, const IluOptions& opts);

  Index size() const noexcept { return offsets_.back(); }
  std::size_t num_blocks() const noexcept { return factors_.size(); }
  const IluFactor& block(std::size_t i) const { return factors_[i]; }
  std::span<const Index> offsets() const noexcept { return offsets_; }

  std::size_t nnz() const noexcept;
  std::size_t pivot_repairs() const noexcept;

  void solve_in_place(std::span<double> x) const;
  Vector solve(const Vector& rhs) const;

 private:
  std::vector<IluFactor> factors_;
  std::vector<Index> offsets_;
};

}  // namespace pslr
