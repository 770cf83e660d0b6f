#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "pslr/lowrank.hpp"
#include "pslr/schur.hpp"

namespace pslr {

struct PslrConfig {
  int s = 35;             ///< subdomains
  int m = 3;              ///< series has m + 1 terms
  Index rank = 15;        ///< requested low-rank correction rank r_k
  double droptol = 1e-2;  ///< ILUT threshold
  std::uint64_t seed = 0; ///< Arnoldi start vector
  std::optional<Index> max_fill_per_row;

  /// Throws Error unless s >= 1, m >= 0, rank >= 0 and droptol >= 0.
  void validate() const;
};

/// Memory accounting relative to nnz(A). Dense V and G count every entry.
struct FillStats {
  std::size_t nnz_a = 0;
  std::size_t nnz_ilu = 0;  ///< sum over blocks of nnz(L) + nnz(U), for B_i and C_i
  std::size_t nnz_lrc = 0;  ///< r q + r^2
  double fill_ilu = 0.0;
  double fill_lowrank = 0.0;
  double fill_total = 0.0;
  std::size_t pivot_repairs = 0;
  double order_time_s = 0.0;  ///< partition + reorder
  double build_time_s = 0.0;  ///< ILUT + Arnoldi + G
};

/// Power series + Schur complement + low-rank correction preconditioner.
///
/// Works in the reordered numbering of its PartitionedSystem; use
/// `reorder` / `restore` (or `solve` in krylov.hpp) to move vectors between
/// the original and reordered numberings.
class PslrPreconditioner {
 public:
  /// Partition, reorder, factor the diagonal blocks of B and C, run Arnoldi on
  /// E_rr(m) and form G.
  static PslrPreconditioner build(const SparseMatrix& a, const PslrConfig& cfg);

  /// Shares an already partitioned and factored context.
  static PslrPreconditioner from_context(std::shared_ptr<const SchurContext> ctx, int m,
                                         LowRankCorrection correction, double order_time_s = 0.0,
                                         double build_time_s = 0.0);

  /// Arnoldi on the error operator of a context; no G yet.
  static ArnoldiResult error_arnoldi(const SchurContext& ctx, int m, Index rank,
                                     std::uint64_t seed);

  /// z = PSLR(b), b and z in reordered numbering:
  ///   (f, g) = b; y = g - F B^{-1} f; y += V G V^T y;
  ///   y = sum_{i<=m} (C0^{-1} Es)^i C0^{-1} y; x = B^{-1}(f - E y)
  Vector apply(const Vector& b) const;

  /// S_app^{-1} v on interface vectors.
  Vector apply_schur_inverse(const Vector& v) const;

  const FillStats& fill_stats() const noexcept { return stats_; }
  const SchurContext& context() const noexcept { return *ctx_; }
  std::shared_ptr<const SchurContext> shared_context() const noexcept { return ctx_; }
  const PartitionedSystem& system() const noexcept { return ctx_->system(); }
  const LowRankCorrection& correction() const noexcept { return correction_; }
  int m() const noexcept { return neumann_.m; }

  Vector reorder(const Vector& original) const { return system().perm.apply(original); }
  Vector restore(const Vector& reordered) const { return system().perm.apply_inverse(reordered); }

 private:
  std::shared_ptr<const SchurContext> ctx_;
  NeumannConfig neumann_{0};
  LowRankCorrection correction_;
  FillStats stats_;
};

}  // namespace pslr
