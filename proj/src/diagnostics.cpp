#include "pslr/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "pslr/error.hpp"

namespace pslr {

namespace {

DenseMatrix block_diagonal(const DenseMatrix& c, std::span<const Index> offsets) {
  DenseMatrix out = DenseMatrix::Zero(c.rows(), c.cols());
  for (std::size_t b = 0; b + 1 < offsets.size(); ++b) {
    const Index lo = offsets[b], len = offsets[b + 1] - offsets[b];
    out.block(lo, lo, len, len) = c.block(lo, lo, len, len);
  }
  return out;
}

DenseMatrix checked_inverse(const DenseMatrix& m, const char* what) {
  if (m.rows() == 0) return m;
  Eigen::FullPivLU<DenseMatrix> lu(m);
  if (!lu.isInvertible()) throw Error(std::string("dense oracle: ") + what + " is singular");
  return lu.inverse();
}

}  // namespace

DenseOracle DenseOracle::from(const PartitionedSystem& system) {
  if (system.n > kDenseOracleLimit)
    throw Error("dense oracle: n = " + std::to_string(system.n) + " exceeds the limit of " +
                std::to_string(kDenseOracleLimit) + "; use a smaller grid");
  DenseOracle o;
  o.B = system.B.to_dense();
  o.E = system.E.to_dense();
  o.F = system.F.to_dense();
  o.C = system.C.to_dense();
  o.C0 = block_diagonal(o.C, system.interface_offsets);
  o.Cg = o.C - o.C0;
  const DenseMatrix b_inv = checked_inverse(o.B, "B");
  o.S = o.C - o.F * b_inv * o.E;
  o.Es = o.C0 - o.S;
  o.C0_inv = checked_inverse(o.C0, "C0");
  o.S_inv = checked_inverse(o.S, "S");
  return o;
}

DenseMatrix DenseOracle::neumann(int m) const {
  if (m < 0) throw Error("dense oracle: m must be >= 0");
  const DenseMatrix t = C0_inv * Es;
  DenseMatrix sum = C0_inv;
  DenseMatrix term = C0_inv;
  for (int i = 1; i <= m; ++i) {
    term = t * term;
    sum += term;
  }
  return sum;
}

DenseMatrix DenseOracle::error_matrix(int m) const {
  return DenseMatrix::Identity(q(), q()) - S * neumann(m);
}

DenseMatrix DenseOracle::error_power(int m) const {
  if (m < 0) throw Error("dense oracle: m must be >= 0");
  const DenseMatrix t = Es * C0_inv;
  DenseMatrix p = t;
  for (int i = 0; i < m; ++i) p = p * t;
  return p;
}

DenseMatrix DenseOracle::approximate_inverse(int m, const DenseMatrix& V,
                                             const DenseMatrix& G) const {
  DenseMatrix corr = DenseMatrix::Identity(q(), q());
  if (V.cols() > 0) corr += V * G * V.transpose();
  return neumann(m) * corr;
}

SpectrumReport spectrum(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("spectrum: matrix not square");
  if (m.rows() > kDenseOracleLimit) throw Error("spectrum: matrix exceeds the dense limit");
  SpectrumReport rep;
  if (m.rows() == 0) return rep;
  Eigen::EigenSolver<DenseMatrix> solver;
  solver.setMaxIterations(30 * static_cast<Index>(m.rows()));
  solver.compute(m, false);
  if (solver.info() != Eigen::Success) throw Error("spectrum: QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(-std::abs(a), a.real(), a.imag()) <
           std::make_tuple(-std::abs(b), b.real(), b.imag());
  });
  rep.spectral_radius = std::abs(rep.eigenvalues.front());
  for (const auto& z : rep.eigenvalues) {
    if (std::abs(z) > 1.0) ++rep.modulus_above_one;
    if (z.real() < 0.0) ++rep.negative_real;
  }
  return rep;
}

DeltaBound delta_bound(const DenseOracle& oracle, int m, const DenseMatrix& V,
                       const DenseMatrix& H) {
  if (V.rows() != oracle.q() && V.cols() > 0)
    throw DimensionError("delta_bound: V does not match the oracle");
  const Index q = oracle.q();
  DenseMatrix vhv = DenseMatrix::Zero(q, q);
  if (V.cols() > 0) vhv = V * H * V.transpose();
  const DenseMatrix x = oracle.error_matrix(m) - vhv;
  const DenseMatrix z = DenseMatrix::Identity(q, q) - vhv;
  Eigen::FullPivLU<DenseMatrix> lu(z);
  if (!lu.isInvertible()) throw Error("delta_bound: Z is singular");
  DeltaBound out;
  out.x_norm = x.norm();
  out.z_inv_norm = lu.inverse().norm();
  out.delta = out.x_norm * out.z_inv_norm;
  return out;
}

BoundReport verify_bound(const DenseOracle& oracle, int m, const LowRankCorrection& correction) {
  const Index q = oracle.q();
  DenseMatrix V = correction.rank() > 0 ? correction.V() : DenseMatrix::Zero(q, 0);
  BoundReport rep;
  rep.m = m;
  rep.rank = correction.rank();
  rep.bound = delta_bound(oracle, m, V, correction.H());

  const DenseMatrix app = oracle.approximate_inverse(m, V, correction.G());
  const DenseMatrix diff = oracle.S_inv - app;
  const double s_inv_norm = oracle.S_inv.norm();
  rep.lhs = diff.norm() / s_inv_norm;

  DenseMatrix vhv = DenseMatrix::Zero(q, q);
  if (V.cols() > 0) vhv = V * correction.H() * V.transpose();
  const DenseMatrix x = oracle.error_matrix(m) - vhv;
  const DenseMatrix z = DenseMatrix::Identity(q, q) - vhv;
  const DenseMatrix rhs = oracle.S_inv * x * z.inverse();
  rep.identity_residual = (diff - rhs).norm() / s_inv_norm;

  rep.bound_holds = rep.lhs <= rep.bound.delta + 1e-9;
  rep.identity_holds = rep.identity_residual <= 1e-9;
  return rep;
}

DenseMatrix assemble(const LinearOperator& op, Index dim) {
  DenseMatrix out(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    const Vector col = op(Vector::Unit(dim, j));
    if (col.size() != dim) throw DimensionError("assemble: operator changes dimension");
    out.col(j) = col;
  }
  return out;
}

void emit_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "re,im\n";
  char buf[96];
  for (const auto& z : report.eigenvalues) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
    out << buf;
  }
  if (!out) throw Error("write failed for " + path.string());
}

double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(a[i] - b[j]), i, j);
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> used_a(n, 0), used_b(n, 0);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = 1;
    worst = std::max(worst, d);
    if (++matched == n) break;
  }
  return worst;
}

}  // namespace pslr
