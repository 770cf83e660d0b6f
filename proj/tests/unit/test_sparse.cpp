#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "pslr/error.hpp"
#include "pslr/matrix_market.hpp"
#include "pslr/sparse.hpp"

namespace pslr {
namespace {

TEST(SparseMatrix, ValidatesCsrArrays) {
  EXPECT_NO_THROW(SparseMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
  EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), DimensionError);  // unsorted
  EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 2}, {0, 0}, {1.0, 2.0}), DimensionError);  // duplicate
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 2.0}), DimensionError);  // range
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1}, {0}, {1.0}), DimensionError);             // row_ptr
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0}), DimensionError);       // values
}

TEST(SparseMatrix, FromTripletsSumsDuplicatesAndSorts) {
  const std::vector<Triplet> t{{1, 2, 1.0}, {0, 1, 3.0}, {1, 0, 2.0}, {1, 2, 4.0}};
  const SparseMatrix a = SparseMatrix::from_triplets(2, 3, t);
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_EQ(a.at(1, 2), 5.0);
  EXPECT_EQ(a.at(0, 1), 3.0);
  EXPECT_EQ(a.at(0, 0), 0.0);
  const auto cols = a.row_cols(1);
  EXPECT_TRUE(std::is_sorted(cols.begin(), cols.end()));
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{2, 0, 1.0}}), DimensionError);
}

TEST(SparseMatrix, EmptyAndIdentity) {
  const SparseMatrix z = SparseMatrix::zeros(3, 4);
  EXPECT_EQ(z.nnz(), 0u);
  EXPECT_EQ(matvec(z, Vector::Ones(4)), Vector::Zero(3));
  const SparseMatrix i = SparseMatrix::identity(5);
  const Vector x = seeded_random_vector(5, 3);
  EXPECT_EQ(matvec(i, x), x);
  const SparseMatrix none = SparseMatrix::zeros(0, 0);
  EXPECT_EQ(matvec(none, Vector(0)).size(), 0);
}

TEST(SparseMatrix, MatvecMatchesDense) {
  const SparseMatrix a = testing::random_nonsymmetric(300, 7);
  const Vector x = seeded_random_vector(300, 11);
  const Vector ref = a.to_dense() * x;
  EXPECT_LT((matvec(a, x) - ref).cwiseAbs().maxCoeff(), 1e-12);
  Vector y = Vector::Ones(300);
  matvec_add(a, as_span(x), as_span(y), -2.0);
  EXPECT_LT((y - (Vector::Ones(300) - 2.0 * ref)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(matvec(a, Vector(299)), DimensionError);
}

TEST(SparseMatrix, TransposeAndDenseRoundTrip) {
  const SparseMatrix a = testing::random_nonsymmetric(40, 2);
  EXPECT_EQ(a.transpose().to_dense(), a.to_dense().transpose());
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_EQ(SparseMatrix::from_dense(a.to_dense()), a);
}

TEST(SparseMatrix, SubtractDropsExactCancellation) {
  const SparseMatrix a = testing::laplacian1d(5);
  const SparseMatrix d = subtract(a, a);
  EXPECT_EQ(d.nnz(), 0u);
  const SparseMatrix i = SparseMatrix::identity(5);
  EXPECT_EQ(subtract(a, i).to_dense(), a.to_dense() - DenseMatrix::Identity(5, 5));
  EXPECT_THROW(subtract(a, SparseMatrix::identity(4)), DimensionError);
}

TEST(SparseMatrix, FrobeniusNorm) {
  const SparseMatrix a = testing::random_nonsymmetric(50, 5);
  EXPECT_NEAR(frobenius_norm(a), a.to_dense().norm(), 1e-12);
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0, 1}), DimensionError);
  EXPECT_THROW(Permutation({0, 3, 1}), DimensionError);
  EXPECT_NO_THROW(Permutation({2, 0, 1}));
}

TEST(Permutation, ApplyAndInverseAreMutualInverses) {
  std::vector<Index> fwd(50);
  std::iota(fwd.begin(), fwd.end(), 0);
  std::shuffle(fwd.begin(), fwd.end(), std::mt19937(4));
  const Permutation p(fwd);
  const Vector v = seeded_random_vector(50, 1);
  EXPECT_EQ(p.apply_inverse(p.apply(v)), v);
  EXPECT_EQ(p.apply(p.apply_inverse(v)), v);
  const Vector pv = p.apply(v);
  for (Index i = 0; i < 50; ++i) EXPECT_EQ(pv[p(i)], v[i]);
  EXPECT_EQ(p.inverted().inverted(), p);
  for (Index i = 0; i < 50; ++i) EXPECT_EQ(p.inverse(p(i)), i);
}

TEST(Permutation, SymmetricPermutationPreservesValuesAndSpectrum) {
  const SparseMatrix a = testing::random_nonsymmetric(80, 9);
  std::vector<Index> fwd(80);
  std::iota(fwd.begin(), fwd.end(), 0);
  std::shuffle(fwd.begin(), fwd.end(), std::mt19937(8));
  const Permutation p(fwd);
  const SparseMatrix b = permute_symmetric(a, p);
  for (Index i = 0; i < 80; ++i)
    for (Index j = 0; j < 80; ++j) ASSERT_EQ(b.at(p(i), p(j)), a.at(i, j));

  std::vector<double> va(a.values().begin(), a.values().end());
  std::vector<double> vb(b.values().begin(), b.values().end());
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  EXPECT_EQ(va, vb);

  auto eig = [](const DenseMatrix& m) {
    Eigen::VectorXcd e = Eigen::EigenSolver<DenseMatrix>(m, false).eigenvalues();
    std::vector<std::complex<double>> out(e.data(), e.data() + e.size());
    std::sort(out.begin(), out.end(), [](auto x, auto y) {
      return std::make_pair(x.real(), x.imag()) < std::make_pair(y.real(), y.imag());
    });
    return out;
  };
  const auto ea = eig(a.to_dense()), eb = eig(b.to_dense());
  for (std::size_t k = 0; k < ea.size(); ++k) EXPECT_LT(std::abs(ea[k] - eb[k]), 1e-10);
}

TEST(Extraction, SubmatrixAndBlock) {
  const SparseMatrix a = testing::random_nonsymmetric(30, 3);
  const DenseMatrix d = a.to_dense();
  const std::vector<Index> rows{1, 4, 9, 20}, cols{0, 4, 5, 29};
  const SparseMatrix s = extract_submatrix(a, rows, cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) EXPECT_EQ(s.at(i, j), d(rows[i], cols[j]));
  EXPECT_EQ(extract_block(a, 3, 10, 5, 30).to_dense(), d.block(3, 5, 7, 25));
  const std::vector<Index> unsorted{4, 1};
  EXPECT_THROW(extract_submatrix(a, unsorted, cols), DimensionError);
}

TEST(MatrixMarket, SymmetricLowerTriangleExpands) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% lower triangle of tridiag(-1, 2, -1)\n"
      "3 3 5\n"
      "1 1 2\n2 1 -1\n2 2 2\n3 2 -1\n3 3 2\n");
  const SparseMatrix a = read_matrix_market(in);
  EXPECT_EQ(a.nnz(), 7u);
  EXPECT_EQ(a.to_dense(), testing::laplacian1d(3).to_dense());
}

TEST(MatrixMarket, RoundTripIsExact) {
  const SparseMatrix a = testing::random_nonsymmetric(60, 12);
  std::stringstream buf;
  write_matrix_market(a, buf);
  EXPECT_EQ(read_matrix_market(buf), a);
}

TEST(MatrixMarket, HeaderIsCaseInsensitiveAndDuplicatesSum) {
  std::istringstream in(
      "%%MatrixMarket MATRIX Coordinate REAL General\n2 2 3\n1 1 1.5\n1 1 2.5\n2 2 1\n");
  const SparseMatrix a = read_matrix_market(in);
  EXPECT_EQ(a.at(0, 0), 4.0);
  EXPECT_EQ(a.nnz(), 2u);
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_matrix_market(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n"), 1u);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"), 1u);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n3 1 1\n"), 4u);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 x\n"), 3u);
  EXPECT_GT(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n"), 0u);
  EXPECT_EQ(parse_error_line("not a header\n"), 1u);
}

TEST(MatrixMarket, MissingFileThrows) {
  EXPECT_THROW(read_matrix_market(std::filesystem::path("/nonexistent/a.mtx")), Error);
}

TEST(SeededRandom, DeterministicAndInRange) {
  const Vector a = seeded_random_vector(1000, 42), b = seeded_random_vector(1000, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, seeded_random_vector(1000, 43));
  EXPECT_LT(a.maxCoeff(), 1.0);
  EXPECT_GE(a.minCoeff(), -1.0);
  EXPECT_NEAR(a.mean(), 0.0, 0.1);
}

}  // namespace
}  // namespace pslr
