#include "pslr/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pslr/error.hpp"

namespace pslr {

ArnoldiResult arnoldi(const LinearOperator& op, Index dim, Index max_rank, std::uint64_t seed) {
  if (max_rank < 0) throw Error("arnoldi: negative rank");
  ArnoldiResult out;
  const Index steps = std::min(max_rank, dim);
  if (steps <= 0) {
    out.V = DenseMatrix::Zero(std::max<Index>(dim, 0), 0);
    out.H = DenseMatrix::Zero(0, 0);
    return out;
  }

  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(steps) + 1);
  Vector v = seeded_random_vector(dim, seed);
  basis.push_back(v / v.norm());

  DenseMatrix hess = DenseMatrix::Zero(steps + 1, steps);
  double first_norm = 0.0;
  Index rank = 0;
  for (Index j = 0; j < steps; ++j) {
    Vector w = op(basis[j]);
    if (w.size() != dim) throw DimensionError("arnoldi: operator changed the vector length");
    if (j == 0) first_norm = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i <= j; ++i) {
        const double h = basis[i].dot(w);
        w -= h * basis[i];
        hess(i, j) += h;
      }
    }
    const double beta = w.norm();
    hess(j + 1, j) = beta;
    rank = j + 1;
    if (!std::isfinite(beta)) throw DivergenceError("arnoldi: non-finite basis vector");
    if (beta <= 1e-14 * first_norm) {
      out.breakdown = true;
      break;
    }
    basis.push_back(w / beta);
  }

  out.rank = rank;
  out.V.resize(dim, rank);
  for (Index j = 0; j < rank; ++j) out.V.col(j) = basis[j];
  out.H = hess.topLeftCorner(rank, rank);
  out.residual = hess(rank, rank - 1);
  if (!out.breakdown) out.next = basis[rank];
  return out;
}

LowRankCorrection LowRankCorrection::build(DenseMatrix V, DenseMatrix H) {
  if (H.rows() != H.cols()) throw DimensionError("build_correction: H not square");
  if (V.cols() != H.rows()) throw DimensionError("build_correction: V and H disagree on rank");
  LowRankCorrection lr;
  const Index r = static_cast<Index>(H.rows());
  lr.G_ = DenseMatrix::Zero(r, r);
  if (r > 0) {
    const DenseMatrix i_minus_h = DenseMatrix::Identity(r, r) - H;
    Eigen::PartialPivLU<DenseMatrix> lu(i_minus_h);
    const double scale = i_minus_h.norm();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= 1e-14 * scale) || scale == 0.0) throw SingularCorrectionError();
    lr.G_ = lu.inverse() - DenseMatrix::Identity(r, r);
  }
  lr.V_ = std::move(V);
  lr.H_ = std::move(H);
  return lr;
}

LowRankCorrection LowRankCorrection::from_arnoldi(const ArnoldiResult& run) {
  return build(run.V, run.H);
}

LowRankCorrection LowRankCorrection::from_arnoldi(const ArnoldiResult& run, Index rank) {
  if (rank < 0) throw Error("from_arnoldi: negative rank");
  const Index r = std::min(rank, run.rank);
  return build(run.V.leftCols(r), run.H.topLeftCorner(r, r));
}

Vector LowRankCorrection::apply(const Vector& y) const {
  if (rank() == 0) return y;
  if (y.size() != dim())
    throw DimensionError("apply_correction: expected length " + std::to_string(dim()));
  const Vector coeff = G_ * (V_.transpose() * y);
  return y + V_ * coeff;
}

}  // namespace pslr
