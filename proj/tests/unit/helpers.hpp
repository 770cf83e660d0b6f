#pragma once

#include <random>
#include <vector>

#include "pslr/problems.hpp"
#include "pslr/sparse.hpp"

namespace pslr::testing {

/// tridiag(-1, 2, -1) of order n
inline SparseMatrix laplacian1d(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, t);
}

inline SparseMatrix laplacian3d(Index nx, Index ny, Index nz, double shift = 0.0) {
  ProblemSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.nz = nz;
  spec.shift = shift;
  return pslr::laplacian3d(spec);
}

/// Nonsymmetric, diagonally dominant matrix with a banded random pattern.
inline SparseMatrix random_nonsymmetric(Index n, unsigned seed, Index bandwidth = 6,
                                        double density = 0.5) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (Index j = std::max<Index>(0, i - bandwidth); j < std::min(n, i + bandwidth + 1); ++j) {
      if (j == i || !keep(gen)) continue;
      const double v = val(gen);
      rowsum += std::abs(v);
      t.push_back({i, j, v});
    }
    t.push_back({i, i, rowsum + 0.5 + std::abs(val(gen))});
  }
  return SparseMatrix::from_triplets(n, n, t);
}

/// Random symmetric positive definite matrix with the same banded pattern.
inline SparseMatrix random_spd(Index n, unsigned seed, Index bandwidth = 5) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(0.5);
  DenseMatrix d = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < std::min(n, i + bandwidth + 1); ++j)
      if (keep(gen)) d(i, j) = d(j, i) = val(gen);
  for (Index i = 0; i < n; ++i) d(i, i) = d.row(i).cwiseAbs().sum() + 0.1 + std::abs(val(gen));
  return SparseMatrix::from_dense(d);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace pslr::testing
