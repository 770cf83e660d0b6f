#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "pslr/diagnostics.hpp"
#include "pslr/error.hpp"
#include "pslr/problems.hpp"

namespace pslr {
namespace {

ProblemSpec grid(Index nx, Index ny, Index nz, double shift = 0.0) {
  ProblemSpec s;
  s.nx = nx;
  s.ny = ny;
  s.nz = nz;
  s.shift = shift;
  return s;
}

TEST(Laplacian3d, SingleNode) {
  EXPECT_EQ(laplacian3d(grid(1, 1, 1)).to_dense(), DenseMatrix::Constant(1, 1, 6.0));
}

TEST(Laplacian3d, StencilAndNnz) {
  const ProblemSpec spec = grid(4, 3, 5, 0.25);
  const SparseMatrix a = laplacian3d(spec);
  ASSERT_EQ(a.rows(), 60);
  // 7 per node minus one per missing neighbour on each boundary face
  EXPECT_EQ(a.nnz(), 7u * 60 - 2u * (3 * 5 + 4 * 5 + 4 * 3));
  auto id = [](Index i, Index j, Index k) { return i + 4 * (j + 3 * k); };
  EXPECT_EQ(a.at(id(1, 1, 1), id(1, 1, 1)), 5.75);
  EXPECT_EQ(a.at(id(1, 1, 1), id(2, 1, 1)), -1.0);
  EXPECT_EQ(a.at(id(1, 1, 1), id(1, 2, 1)), -1.0);
  EXPECT_EQ(a.at(id(1, 1, 1), id(1, 1, 0)), -1.0);
  EXPECT_EQ(a.at(id(3, 1, 1), id(0, 2, 1)), 0.0);  // no wrap-around
}

TEST(Laplacian3d, TwoCubedSpectrumIsAnalytic) {
  const DenseMatrix a = laplacian3d(grid(2, 2, 2)).to_dense();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  std::vector<double> expected;
  for (double ci : {0.5, -0.5})
    for (double cj : {0.5, -0.5})
      for (double ck : {0.5, -0.5}) expected.push_back(6.0 - 2.0 * (ci + cj + ck));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(es.eigenvalues()[i], expected[i], 1e-12);
}

TEST(Laplacian3d, SymmetricDiagonallyDominantSpd) {
  const DenseMatrix a = laplacian3d(grid(6, 5, 4)).to_dense();
  EXPECT_EQ(a, a.transpose());
  for (Index i = 0; i < a.rows(); ++i)
    EXPECT_GE(a(i, i), a.row(i).cwiseAbs().sum() - a(i, i));
  EXPECT_EQ(Eigen::LLT<DenseMatrix>(a).info(), Eigen::Success);
}

TEST(ConvDiff3d, ZeroConvectionIsBitwiseLaplacian) {
  ProblemSpec spec = grid(5, 4, 3, 0.1);
  EXPECT_EQ(convdiff3d(spec), laplacian3d(spec));
}

TEST(ConvDiff3d, SkewPartIsHGammaOnAxisPairs) {
  ProblemSpec spec = grid(4, 4, 4);
  spec.convection = {0.1, 0.2, 0.3};
  const SparseMatrix a = convdiff3d(spec);
  const DenseMatrix d = a.to_dense();
  EXPECT_GT((d - d.transpose()).norm(), 0.0);
  const double h = 1.0 / 5.0;
  auto id = [](Index i, Index j, Index k) { return i + 4 * (j + 4 * k); };
  const Index c = id(1, 1, 1);
  const std::array<Index, 3> plus{id(2, 1, 1), id(1, 2, 1), id(1, 1, 2)};
  for (int axis = 0; axis < 3; ++axis) {
    const double g = spec.convection[axis];
    EXPECT_NEAR(d(c, plus[axis]), -1.0 - h * g / 2, 1e-15);
    EXPECT_NEAR(d(plus[axis], c), -1.0 + h * g / 2, 1e-15);
    EXPECT_NEAR(d(plus[axis], c) - d(c, plus[axis]), h * g, 1e-15);
  }
  EXPECT_EQ(d.diagonal(), Vector::Constant(64, 6.0));
}

TEST(ConvDiff3d, SmallConvectionKeepsSpectrumInRightHalfPlane) {
  ProblemSpec spec = grid(4, 4, 4);
  spec.convection = {0.1, 0.1, 0.1};
  const SpectrumReport rep = spectrum(convdiff3d(spec).to_dense());
  EXPECT_EQ(rep.negative_real, 0);
  for (const auto& z : rep.eigenvalues) EXPECT_GT(z.real(), 0.0);
}

TEST(NegativeEigenvalues, PublishedCounts) {
  EXPECT_EQ(count_negative_eigs_analytic(grid(32, 32, 32, 0.16)), 20);
  EXPECT_EQ(count_negative_eigs_analytic(grid(50, 50, 50, 0.14)), 78);
  EXPECT_EQ(count_negative_eigs_analytic(grid(50, 50, 50, 0.0)), 0);
}

class NegativeCountOracle : public ::testing::TestWithParam<std::tuple<Index, double>> {};

TEST_P(NegativeCountOracle, MatchesDenseEigensolve) {
  const auto [edge, shift] = GetParam();
  const ProblemSpec spec = grid(edge, edge - 1, edge - 2 > 0 ? edge - 2 : 1, shift);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(laplacian3d(spec).to_dense(), Eigen::EigenvaluesOnly);
  const Index dense = static_cast<Index>((es.eigenvalues().array() < 0.0).count());
  EXPECT_EQ(count_negative_eigs_analytic(spec), dense);
}

INSTANTIATE_TEST_SUITE_P(Grids, NegativeCountOracle,
                         ::testing::Combine(::testing::Values(4, 8, 12),
                                            ::testing::Values(0.0, 0.05, 0.2, 0.5)));

TEST(ProblemSpec, ParseAndFormatRoundTrip) {
  const ProblemSpec lap = ProblemSpec::parse("lap3d:20,10,5,0.14");
  EXPECT_EQ(lap.nx, 20);
  EXPECT_EQ(lap.ny, 10);
  EXPECT_EQ(lap.nz, 5);
  EXPECT_EQ(lap.shift, 0.14);
  EXPECT_FALSE(lap.has_convection());
  EXPECT_EQ(ProblemSpec::parse(lap.to_string()).to_string(), lap.to_string());

  const ProblemSpec cd = ProblemSpec::parse("convdiff3d:4,4,4,0,0.1,0.2,0.3");
  EXPECT_TRUE(cd.has_convection());
  EXPECT_EQ(cd.convection[2], 0.3);
  const ProblemSpec back = ProblemSpec::parse(cd.to_string());
  EXPECT_EQ(back.convection, cd.convection);
  EXPECT_EQ(back.shift, cd.shift);
}

TEST(ProblemSpec, RejectsMalformedText) {
  for (const char* bad : {"lap3d", "lap3d:1,2,3", "lap3d:0,2,2,0", "lap3d:2.5,2,2,0",
                          "lap3d:2,2,2,x", "poisson:2,2,2,0", "convdiff3d:2,2,2,0,1"})
    EXPECT_THROW(ProblemSpec::parse(bad), Error) << bad;
}

}  // namespace
}  // namespace pslr
