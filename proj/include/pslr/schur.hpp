#pragma once

#include "pslr/ilu.hpp"
#include "pslr/partition.hpp"

namespace pslr {

/// Number of extra terms in the power series: the series has m + 1 terms.
struct NeumannConfig {
  int m = 3;

  explicit NeumannConfig(int terms_minus_one = 3);
};

/// Matrix-free Schur complement machinery on top of a partitioned system.
///
/// Splits S = C0 - Es where C0 = diag(C_1, ..., C_s) and
/// Es = (C0 - C) + F B^{-1} E. Every B^{-1} and C0^{-1} below is the block
/// ILU solve, so with droptol = 0 the operators are exact and with
/// droptol > 0 they describe the inexact S that the factors actually define.
class SchurContext {
 public:
  SchurContext(PartitionedSystem system, const IluOptions& opts);

  const PartitionedSystem& system() const noexcept { return system_; }
  const BlockIlu& b_factors() const noexcept { return b_ilu_; }
  const BlockIlu& c0_factors() const noexcept { return c0_ilu_; }
  const IluOptions& ilu_options() const noexcept { return opts_; }

  /// Block-diagonal part of C.
  const SparseMatrix& c0() const noexcept { return c0_; }
  /// C - C0: the inter-subdomain interface couplings.
  const SparseMatrix& cg() const noexcept { return cg_; }

  Index interior_size() const noexcept { return system_.p; }
  Index interface_size() const noexcept { return system_.q; }

  Vector solve_b(const Vector& f) const;
  Vector solve_c0(const Vector& v) const;

  /// C v - F B^{-1} E v
  Vector apply_s(const Vector& v) const;
  /// (C0 - C) v + F B^{-1} E v
  Vector apply_es(const Vector& v) const;
  /// sum_{i=0}^{m} (C0^{-1} Es)^i C0^{-1} v by the recurrence
  ///   y <- C0^{-1} v;  m times: y <- C0^{-1} (Es y + v)
  /// which costs m + 1 C0 solves and m Es applies.
  Vector apply_neumann(const NeumannConfig& cfg, const Vector& v) const;
  /// (Es C0^{-1})^{m+1} v
  Vector apply_error(const NeumannConfig& cfg, const Vector& v) const;

 private:
  void check_interface(const Vector& v, const char* op) const;

  PartitionedSystem system_;
  IluOptions opts_;
  BlockIlu b_ilu_;
  BlockIlu c0_ilu_;
  SparseMatrix c0_;
  SparseMatrix cg_;
};

}  // namespace pslr
