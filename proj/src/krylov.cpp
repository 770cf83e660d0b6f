#include "pslr/krylov.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pslr/error.hpp"
#include "pslr/pslr.hpp"

namespace pslr {

KrylovMethod parse_krylov_method(std::string_view name) {
  if (name == "gmres") return KrylovMethod::gmres;
  if (name == "cg") return KrylovMethod::cg;
  throw Error("unknown krylov method '" + std::string(name) + "'");
}

std::string_view to_string(KrylovMethod method) {
  return method == KrylovMethod::gmres ? "gmres" : "cg";
}

LinearOperator as_operator(const SparseMatrix& a) {
  return [&a](const Vector& x) { return matvec(a, x); };
}

LinearOperator identity_operator() {
  return [](const Vector& x) { return x; };
}

namespace {

using Clock = std::chrono::steady_clock;

void check_finite(double value, const char* where) {
  if (!std::isfinite(value)) throw DivergenceError(std::string(where) + ": non-finite residual");
}

}  // namespace

SolveResult gmres(const LinearOperator& a, const LinearOperator& precond, const Vector& b,
                  const KrylovOptions& opts) {
  const auto t0 = Clock::now();
  const Index n = static_cast<Index>(b.size());
  SolveResult out;
  out.x = Vector::Zero(n);
  SolveReport& rep = out.report;
  rep.history.push_back(1.0);

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    return out;
  }
  const int cycle = opts.restart > 0 ? opts.restart : std::max(opts.maxit, 1);

  std::vector<Vector> basis;
  DenseMatrix h(cycle + 1, cycle);
  Vector cs(cycle), sn(cycle), g(cycle + 1);

  Vector r = b;
  for (;;) {
    if (rep.iterations > 0) r = b - a(out.x);
    const double beta = r.norm();
    const double relres = beta / bnorm;
    check_finite(relres, "gmres");
    rep.history.back() = rep.iterations == 0 ? 1.0 : relres;
    rep.final_relres = relres;
    if (relres <= opts.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opts.maxit) break;

    basis.clear();
    basis.push_back(r / beta);
    h.setZero();
    g.setZero();
    g[0] = beta;
    int k = 0;
    while (k < cycle && rep.iterations < opts.maxit) {
      Vector w = a(precond(basis[k]));
      for (int i = 0; i <= k; ++i) {
        h(i, k) = basis[i].dot(w);
        w -= h(i, k) * basis[i];
      }
      const double hnext = w.norm();
      h(k + 1, k) = hnext;
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double rho = std::hypot(h(k, k), h(k + 1, k));
      if (rho == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = h(k, k) / rho;
        sn[k] = h(k + 1, k) / rho;
      }
      h(k, k) = rho;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      ++k;
      ++rep.iterations;
      const double est = std::abs(g[k]) / bnorm;
      check_finite(est, "gmres");
      rep.history.push_back(est);
      if (est <= opts.tol || hnext <= 1e-14 * beta) break;
      basis.push_back(w / hnext);
    }

    // x += M (V_k y_k) with y_k from the triangular least-squares system
    Vector y = g.head(k);
    for (int i = k - 1; i >= 0; --i) {
      for (int j = i + 1; j < k; ++j) y[i] -= h(i, j) * y[j];
      y[i] /= h(i, i);
    }
    Vector u = Vector::Zero(n);
    for (int i = 0; i < k; ++i) u += y[i] * basis[i];
    out.x += precond(u);
  }
  rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

SolveResult cg(const LinearOperator& a, const LinearOperator& precond, const Vector& b,
               const KrylovOptions& opts) {
  const auto t0 = Clock::now();
  const Index n = static_cast<Index>(b.size());
  SolveResult out;
  out.x = Vector::Zero(n);
  SolveReport& rep = out.report;
  rep.history.push_back(1.0);

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    return out;
  }

  Vector r = b;
  Vector z = precond(r);
  Vector p = z;
  double rz = r.dot(z);
  while (rep.iterations < opts.maxit) {
    const Vector ap = a(p);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw NotSpdError("cg: matrix not SPD (p^T A p = " + std::to_string(curvature) +
                        " at iteration " + std::to_string(rep.iterations + 1) + ")");
    const double alpha = rz / curvature;
    out.x += alpha * p;
    r -= alpha * ap;
    ++rep.iterations;
    double relres = r.norm() / bnorm;
    check_finite(relres, "cg");
    if (relres <= opts.tol) {
      // confirm against the true residual before stopping
      r = b - a(out.x);
      relres = r.norm() / bnorm;
      rep.history.push_back(relres);
      if (relres <= opts.tol) {
        rep.converged = true;
        break;
      }
      z = precond(r);
      p = z;
      rz = r.dot(z);
      continue;
    }
    rep.history.push_back(relres);
    // Polak-Ribiere beta: equals Fletcher-Reeves for a symmetric M, and keeps
    // convergence when threshold dropping leaves M slightly nonsymmetric.
    const Vector z_prev = std::move(z);
    z = precond(r);
    const double rz_next = r.dot(z);
    const double beta = (rz_next - r.dot(z_prev)) / rz;
    p = z + beta * p;
    rz = rz_next;
  }
  rep.final_relres = (b - a(out.x)).norm() / bnorm;
  rep.converged = rep.converged && rep.final_relres <= opts.tol;
  rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

SolveResult solve(const SparseMatrix& a, const Vector& b, const PslrPreconditioner& precond,
                  KrylovMethod method, const KrylovOptions& opts) {
  if (b.size() != a.rows()) throw DimensionError("solve: rhs length mismatch");
  const SparseMatrix& ar = precond.system().reordered;
  if (ar.rows() != a.rows()) throw DimensionError("solve: preconditioner built for another matrix");
  const Vector br = precond.reorder(b);
  const LinearOperator op = as_operator(ar);
  const LinearOperator m = [&precond](const Vector& v) { return precond.apply(v); };
  SolveResult res = method == KrylovMethod::gmres ? gmres(op, m, br, opts) : cg(op, m, br, opts);
  res.x = precond.restore(res.x);
  return res;
}

}  // namespace pslr
