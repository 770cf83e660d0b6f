#include "pslr/schur.hpp"

#include <string>

#include "pslr/error.hpp"

namespace pslr {

NeumannConfig::NeumannConfig(int terms_minus_one) : m(terms_minus_one) {
  if (m < 0) throw Error("power series needs m >= 0");
}

namespace {

SparseMatrix block_diagonal_part(const SparseMatrix& c, std::span<const Index> offsets) {
  std::vector<Triplet> t;
  for (std::size_t b = 0; b + 1 < offsets.size(); ++b) {
    for (Index i = offsets[b]; i < offsets[b + 1]; ++i) {
      const auto cols = c.row_cols(i);
      const auto vals = c.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k] >= offsets[b] && cols[k] < offsets[b + 1]) t.push_back({i, cols[k], vals[k]});
    }
  }
  return SparseMatrix::from_triplets(c.rows(), c.cols(), t);
}

}  // namespace

SchurContext::SchurContext(PartitionedSystem system, const IluOptions& opts)
    : system_(std::move(system)), opts_(opts) {
  b_ilu_ = BlockIlu::factor(system_.B_blocks, opts_);
  c0_ilu_ = BlockIlu::factor(system_.C_blocks, opts_);
  c0_ = block_diagonal_part(system_.C, system_.interface_offsets);
  cg_ = subtract(system_.C, c0_);
}

void SchurContext::check_interface(const Vector& v, const char* op) const {
  if (v.size() != system_.q)
    throw DimensionError(std::string(op) + ": expected length " + std::to_string(system_.q) +
                         ", got " + std::to_string(v.size()));
}

Vector SchurContext::solve_b(const Vector& f) const {
  if (f.size() != system_.p) throw DimensionError("solve_b: size mismatch");
  return b_ilu_.solve(f);
}

Vector SchurContext::solve_c0(const Vector& v) const {
  check_interface(v, "solve_c0");
  return c0_ilu_.solve(v);
}

Vector SchurContext::apply_s(const Vector& v) const {
  check_interface(v, "apply_S");
  Vector w = matvec(system_.E, v);
  b_ilu_.solve_in_place(as_span(w));
  Vector y = matvec(system_.C, v);
  matvec_add(system_.F, as_span(w), as_span(y), -1.0);
  return y;
}

Vector SchurContext::apply_es(const Vector& v) const {
  check_interface(v, "apply_Es");
  Vector w = matvec(system_.E, v);
  b_ilu_.solve_in_place(as_span(w));
  Vector y = matvec(system_.F, w);
  matvec_add(cg_, as_span(v), as_span(y), -1.0);
  return y;
}

Vector SchurContext::apply_neumann(const NeumannConfig& cfg, const Vector& v) const {
  check_interface(v, "apply_neumann");
  Vector y = c0_ilu_.solve(v);
  for (int k = 0; k < cfg.m; ++k) {
    Vector t = apply_es(y);
    t += v;
    c0_ilu_.solve_in_place(as_span(t));
    y = std::move(t);
  }
  return y;
}

Vector SchurContext::apply_error(const NeumannConfig& cfg, const Vector& v) const {
  check_interface(v, "apply_Err");
  Vector y = v;
  for (int k = 0; k <= cfg.m; ++k) y = apply_es(c0_ilu_.solve(y));
  return y;
}

}  // namespace pslr
