#pragma once

#include <string_view>
#include <vector>

#include "pslr/lowrank.hpp"
#include "pslr/sparse.hpp"

namespace pslr {

class PslrPreconditioner;

struct KrylovOptions {
  double tol = 1e-8;  ///< on ||b - A x|| / ||b||
  int maxit = 500;
  int restart = 0;    ///< GMRES cycle length; 0 = full GMRES
};

/// Iteration record. `iterations == maxit` and `converged == false` is the
/// failure marker.
struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_relres = 1.0;
  std::vector<double> history;  ///< relative residual per iteration, history[0] = 1
  double seconds = 0.0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

enum class KrylovMethod { gmres, cg };

KrylovMethod parse_krylov_method(std::string_view name);
std::string_view to_string(KrylovMethod method);

/// Right-preconditioned GMRES from a zero initial guess: solves A M u = b and
/// returns x = M u. Inside a cycle the residual comes from the Givens
/// recurrence; at every cycle boundary it is recomputed from b - A x.
SolveResult gmres(const LinearOperator& a, const LinearOperator& precond, const Vector& b,
                  const KrylovOptions& opts = {});

/// Preconditioned conjugate gradients from a zero initial guess, with the
/// Polak-Ribiere direction update. Throws NotSpdError when p^T A p <= 0.
SolveResult cg(const LinearOperator& a, const LinearOperator& precond, const Vector& b,
               const KrylovOptions& opts = {});

LinearOperator as_operator(const SparseMatrix& a);
LinearOperator identity_operator();

/// Solves A x = b (original numbering) with PSLR, handling the reordering.
SolveResult solve(const SparseMatrix& a, const Vector& b, const PslrPreconditioner& precond,
                  KrylovMethod method, const KrylovOptions& opts = {});

}  // namespace pslr
