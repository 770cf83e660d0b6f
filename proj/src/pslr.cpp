#include "pslr/pslr.hpp"

#include <chrono>
#include <string>

#include "pslr/error.hpp"

namespace pslr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PslrConfig::validate() const {
  if (s < 1) throw Error("pslr: s must be >= 1");
  if (m < 0) throw Error("pslr: m must be >= 0");
  if (rank < 0) throw Error("pslr: rank must be >= 0");
  if (!(droptol >= 0.0)) throw Error("pslr: droptol must be >= 0");
}

ArnoldiResult PslrPreconditioner::error_arnoldi(const SchurContext& ctx, int m, Index rank,
                                                std::uint64_t seed) {
  const NeumannConfig cfg(m);
  return arnoldi([&](const Vector& v) { return ctx.apply_error(cfg, v); },
                 ctx.interface_size(), rank, seed);
}

PslrPreconditioner PslrPreconditioner::build(const SparseMatrix& a, const PslrConfig& cfg) {
  cfg.validate();
  if (!a.is_square()) throw DimensionError("pslr: matrix not square");

  auto t0 = std::chrono::steady_clock::now();
  PartitionedSystem system = classify_and_reorder(a, partition_graph(a, cfg.s, cfg.seed));
  const double order_time = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  IluOptions ilu_opts{cfg.droptol, cfg.max_fill_per_row};
  auto ctx = std::make_shared<const SchurContext>(std::move(system), ilu_opts);
  const ArnoldiResult run = error_arnoldi(*ctx, cfg.m, cfg.rank, cfg.seed);
  LowRankCorrection correction = LowRankCorrection::from_arnoldi(run);
  const double build_time = seconds_since(t0);

  return from_context(std::move(ctx), cfg.m, std::move(correction), order_time, build_time);
}

PslrPreconditioner PslrPreconditioner::from_context(std::shared_ptr<const SchurContext> ctx, int m,
                                                    LowRankCorrection correction,
                                                    double order_time_s, double build_time_s) {
  if (!ctx) throw Error("pslr: null context");
  if (correction.rank() > 0 && correction.dim() != ctx->interface_size())
    throw DimensionError("pslr: correction does not match the interface size");
  PslrPreconditioner p;
  p.ctx_ = std::move(ctx);
  p.neumann_ = NeumannConfig(m);
  p.correction_ = std::move(correction);

  FillStats& st = p.stats_;
  st.nnz_a = p.ctx_->system().reordered.nnz();
  st.nnz_ilu = p.ctx_->b_factors().nnz() + p.ctx_->c0_factors().nnz();
  st.nnz_lrc = p.correction_.nnz();
  const double denom = st.nnz_a > 0 ? static_cast<double>(st.nnz_a) : 1.0;
  st.fill_ilu = static_cast<double>(st.nnz_ilu) / denom;
  st.fill_lowrank = static_cast<double>(st.nnz_lrc) / denom;
  st.fill_total = st.fill_ilu + st.fill_lowrank;
  st.pivot_repairs = p.ctx_->b_factors().pivot_repairs() + p.ctx_->c0_factors().pivot_repairs();
  st.order_time_s = order_time_s;
  st.build_time_s = build_time_s;
  return p;
}

Vector PslrPreconditioner::apply_schur_inverse(const Vector& v) const {
  return ctx_->apply_neumann(neumann_, correction_.apply(v));
}

Vector PslrPreconditioner::apply(const Vector& b) const {
  const auto& sys = ctx_->system();
  if (b.size() != sys.n)
    throw DimensionError("pslr apply: expected length " + std::to_string(sys.n));
  const Index p = sys.p;
  const Index q = sys.q;
  Vector z(sys.n);
  if (q == 0) {
    z = ctx_->b_factors().solve(b);
    return z;
  }

  const Vector f = b.head(p);
  Vector w = ctx_->b_factors().solve(f);
  Vector y = b.tail(q);
  matvec_add(sys.F, as_span(w), as_span(y), -1.0);
  y = apply_schur_inverse(y);

  Vector rhs = f;
  matvec_add(sys.E, as_span(y), as_span(rhs), -1.0);
  ctx_->b_factors().solve_in_place(as_span(rhs));
  z.head(p) = rhs;
  z.tail(q) = y;
  return z;
}

}  // namespace pslr
