#pragma once

#include <cstdint>
#include <functional>

#include "pslr/dense.hpp"

namespace pslr {

/// A linear map on q-vectors.
using LinearOperator = std::function<Vector(const Vector&)>;

/// Output of an r-step Arnoldi run: op V = V H + h_{r+1,r} v_{r+1} e_r^T.
struct ArnoldiResult {
  DenseMatrix V;           ///< q x r, orthonormal columns
  DenseMatrix H;           ///< r x r upper Hessenberg
  Index rank = 0;          ///< achieved r (<= requested)
  bool breakdown = false;  ///< stopped on an invariant subspace
  double residual = 0.0;   ///< h_{r+1,r}
  Vector next;             ///< v_{r+1}; empty after breakdown
};

/// Modified Gram-Schmidt Arnoldi with one full reorthogonalization pass.
///
/// The start vector is seeded_random_vector(dim, seed) normalized. The run
/// stops early (happy breakdown) once the orthogonalized image has norm
/// <= 1e-14 times the norm of the first image op(v_1).
ArnoldiResult arnoldi(const LinearOperator& op, Index dim, Index max_rank, std::uint64_t seed);

/// I + V G V^T with G = (I - H)^{-1} - I, i.e. (I - V H V^T)^{-1} by
/// Sherman-Morrison-Woodbury.
class LowRankCorrection {
 public:
  LowRankCorrection() = default;

  /// Factors I - H with partial pivoting. Throws SingularCorrectionError
  /// when a pivot falls below 1e-14 * ||I - H||_F.
  static LowRankCorrection build(DenseMatrix V, DenseMatrix H);
  static LowRankCorrection from_arnoldi(const ArnoldiResult& run);
  /// Keeps the leading r Arnoldi vectors; a truncated Arnoldi run is itself
  /// an r-step Arnoldi run from the same start vector.
  static LowRankCorrection from_arnoldi(const ArnoldiResult& run, Index rank);

  Index rank() const noexcept { return static_cast<Index>(V_.cols()); }
  Index dim() const noexcept { return static_cast<Index>(V_.rows()); }
  const DenseMatrix& V() const noexcept { return V_; }
  const DenseMatrix& H() const noexcept { return H_; }
  const DenseMatrix& G() const noexcept { return G_; }

  /// y + V (G (V^T y)); y unchanged when the rank is 0.
  Vector apply(const Vector& y) const;

  /// Dense entries of V and G.
  std::size_t nnz() const noexcept {
    return static_cast<std::size_t>(V_.size() + G_.size());
  }

 private:
  DenseMatrix V_;
  DenseMatrix H_;
  DenseMatrix G_;
};

}  // namespace pslr
