#pragma once

#include <array>
#include <string>
#include <string_view>

#include "pslr/sparse.hpp"

namespace pslr {

/// 7-point finite-difference problem on the unit cube with zero Dirichlet
/// boundary, scaled by h^2 so that the Laplacian stencil is (6; -1 x 6).
struct ProblemSpec {
  Index nx = 1, ny = 1, nz = 1;
  /// Subtracted from every diagonal entry (h^2 * beta for -lap u - beta u).
  double shift = 0.0;
  /// Convection vector gamma of -lap u - gamma . grad u - beta u.
  std::array<double, 3> convection{0.0, 0.0, 0.0};

  Index size() const noexcept { return nx * ny * nz; }
  double h() const noexcept { return 1.0 / (nx + 1); }
  bool has_convection() const noexcept {
    return convection[0] != 0.0 || convection[1] != 0.0 || convection[2] != 0.0;
  }

  /// Parses `lap3d:nx,ny,nz,shift` or `convdiff3d:nx,ny,nz,shift,gx,gy,gz`.
  static ProblemSpec parse(std::string_view text);
  std::string to_string() const;
};

/// Shifted 3D Laplacian, lexicographic ordering with x fastest.
SparseMatrix laplacian3d(const ProblemSpec& spec);

/// Laplacian plus centred convection: the neighbour at +h_d along axis d gets
/// -1 - h_d gamma_d / 2 and the one at -h_d gets -1 + h_d gamma_d / 2, where
/// h_d = 1/(n_d + 1). Identical to laplacian3d when gamma = 0.
SparseMatrix convdiff3d(const ProblemSpec& spec);

/// Number of eigenvalues 6 - 2(cos(i pi h_x) + cos(j pi h_y) + cos(k pi h_z))
/// of the unshifted Laplacian that lie below the shift.
Index count_negative_eigs_analytic(const ProblemSpec& spec);

}  // namespace pslr
