#pragma once

#include <complex>
#include <filesystem>
#include <vector>

#include "pslr/lowrank.hpp"
#include "pslr/partition.hpp"

namespace pslr {

/// Largest system the dense oracle will form.
inline constexpr Index kDenseOracleLimit = 4000;

/// Dense, exact-arithmetic versions of every Schur-complement operator for a
/// small partitioned system. B is inverted by LU, so nothing here depends on
/// ILU factors.
class DenseOracle {
 public:
  static DenseOracle from(const PartitionedSystem& system);

  Index p() const noexcept { return static_cast<Index>(B.rows()); }
  Index q() const noexcept { return static_cast<Index>(C.rows()); }

  /// sum_{i=0}^{m} (C0^{-1} Es)^i C0^{-1}
  DenseMatrix neumann(int m) const;
  /// E_rr(m) from its definition S (S^{-1} - neumann(m)) = I - S neumann(m).
  DenseMatrix error_matrix(int m) const;
  /// (Es C0^{-1})^{m+1}
  DenseMatrix error_power(int m) const;
  /// neumann(m) (I + V G V^T)
  DenseMatrix approximate_inverse(int m, const DenseMatrix& V, const DenseMatrix& G) const;

  DenseMatrix B, E, F, C;
  DenseMatrix C0, Cg;
  DenseMatrix S, Es;
  DenseMatrix S_inv, C0_inv;
};

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by modulus, descending
  double spectral_radius = 0.0;
  Index modulus_above_one = 0;
  Index negative_real = 0;
};

/// All eigenvalues via Hessenberg reduction + shifted QR (Eigen::EigenSolver).
SpectrumReport spectrum(const DenseMatrix& m);

/// X = E_rr(m) - V H V^T and Z = I - V H V^T.
struct DeltaBound {
  double x_norm = 0.0;     ///< ||X||_F
  double z_inv_norm = 0.0; ///< ||Z^{-1}||_F
  double delta = 0.0;      ///< product of the two
};

DeltaBound delta_bound(const DenseOracle& oracle, int m, const DenseMatrix& V,
                       const DenseMatrix& H);

/// Relative approximation error of S_app^{-1} against Delta, together with
/// the exact residual identity S^{-1} - S_app^{-1} = S^{-1} X Z^{-1}.
struct BoundReport {
  int m = 0;
  Index rank = 0;
  double lhs = 0.0;                ///< ||S^{-1} - S_app^{-1}||_F / ||S^{-1}||_F
  DeltaBound bound;
  double identity_residual = 0.0;  ///< relative Frobenius residual of the identity
  bool bound_holds = false;        ///< lhs <= delta + 1e-9
  bool identity_holds = false;     ///< identity_residual <= 1e-9
};

BoundReport verify_bound(const DenseOracle& oracle, int m, const LowRankCorrection& correction);

/// Dense matrix of a linear operator, one column per unit vector. Lets the
/// q x q interface operators of systems beyond the oracle limit be formed
/// from sparse exact-mode solves.
DenseMatrix assemble(const LinearOperator& op, Index dim);

/// Writes `re,im` rows (17 significant digits) after a header line.
void emit_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path);

/// Greatest distance in a nearest-neighbour matching of two equally sized
/// eigenvalue lists; infinity when the sizes differ.
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

}  // namespace pslr
