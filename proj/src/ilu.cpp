#include "pslr/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "pslr/error.hpp"

namespace pslr {

IluFactor::IluFactor(SparseMatrix lower, SparseMatrix upper, std::vector<double> diag,
                     std::size_t pivot_repairs, std::size_t zero_rows)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      diag_(std::move(diag)),
      pivot_repairs_(pivot_repairs),
      zero_rows_(zero_rows) {}

void IluFactor::solve_in_place(std::span<double> x) const {
  const Index n = size();
  if (x.size() != static_cast<std::size_t>(n)) throw DimensionError("ilu solve: size mismatch");
  const auto lp = lower_.row_ptr();
  const auto lc = lower_.col_idx();
  const auto lv = lower_.values();
  for (Index i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = lp[i]; k < lp[i + 1]; ++k) s -= lv[k] * x[lc[k]];
    x[i] = s;
  }
  const auto up = upper_.row_ptr();
  const auto uc = upper_.col_idx();
  const auto uv = upper_.values();
  for (Index i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (std::size_t k = up[i]; k < up[i + 1]; ++k) s -= uv[k] * x[uc[k]];
    x[i] = s / diag_[i];
  }
}

DenseMatrix IluFactor::dense_l() const {
  DenseMatrix l = lower_.to_dense();
  l.diagonal().setOnes();
  return l;
}

DenseMatrix IluFactor::dense_u() const {
  DenseMatrix u = upper_.to_dense();
  for (Index i = 0; i < size(); ++i) u(i, i) = diag_[i];
  return u;
}

namespace {

// Keeps the `cap` largest-magnitude (index, value) pairs, then restores column order.
void cap_row(std::vector<std::pair<Index, double>>& row, std::optional<Index> cap) {
  if (!cap || row.size() <= static_cast<std::size_t>(*cap)) return;
  std::nth_element(row.begin(), row.begin() + *cap, row.end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) > std::abs(b.second) ||
           (std::abs(a.second) == std::abs(b.second) && a.first < b.first);
  });
  row.resize(*cap);
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

}  // namespace

IluFactor ilut(const SparseMatrix& a, const IluOptions& opts) {
  if (!a.is_square()) throw DimensionError("ilut: block not square");
  if (opts.droptol < 0.0) throw Error("ilut: droptol must be nonnegative");
  const Index n = a.rows();

  std::vector<std::size_t> lp(static_cast<std::size_t>(n) + 1, 0), up(lp);
  std::vector<Index> lc, uc;
  std::vector<double> lv, uv;
  std::vector<double> diag(n, 0.0);
  std::size_t repairs = 0, zero_rows = 0;

  // dense work row and its sparsity pattern
  std::vector<double> work(n, 0.0);
  std::vector<char> present(n, 0);
  std::vector<Index> pattern;
  std::priority_queue<Index, std::vector<Index>, std::greater<>> pending;
  std::vector<std::pair<Index, double>> lrow, urow;

  for (Index i = 0; i < n; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    double norm2 = 0.0;
    for (double v : vals) norm2 += v * v;
    const double row_norm = std::sqrt(norm2);
    const double tol = opts.droptol * row_norm;
    const double original_pivot = a.at(i, i);
    if (row_norm == 0.0) ++zero_rows;

    pattern.clear();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index j = cols[k];
      work[j] = vals[k];
      present[j] = 1;
      pattern.push_back(j);
      if (j < i) pending.push(j);
    }

    lrow.clear();
    while (!pending.empty()) {
      const Index k = pending.top();
      pending.pop();
      double mult = work[k] / diag[k];
      work[k] = 0.0;
      if (mult == 0.0 || std::abs(mult) < tol) continue;
      lrow.emplace_back(k, mult);
      for (std::size_t t = up[k]; t < up[k + 1]; ++t) {
        const Index j = uc[t];
        if (!present[j]) {
          present[j] = 1;
          work[j] = 0.0;
          pattern.push_back(j);
          if (j < i) pending.push(j);
        }
        work[j] -= mult * uv[t];
      }
    }

    urow.clear();
    double pivot = present[i] ? work[i] : 0.0;
    for (Index j : pattern) {
      if (j > i) {
        const double v = work[j];
        if (v != 0.0 && std::abs(v) >= tol) urow.emplace_back(j, v);
      }
      work[j] = 0.0;
      present[j] = 0;
    }
    std::sort(urow.begin(), urow.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    cap_row(lrow, opts.max_fill_per_row);
    cap_row(urow, opts.max_fill_per_row);

    if (pivot == 0.0) {
      double repl = opts.droptol * row_norm;
      if (repl == 0.0) repl = row_norm > 0.0 ? 1e-8 * row_norm : 1.0;
      pivot = original_pivot < 0.0 ? -repl : repl;
      ++repairs;
    }
    diag[i] = pivot;

    for (const auto& [j, v] : lrow) {
      lc.push_back(j);
      lv.push_back(v);
    }
    lp[i + 1] = lc.size();
    for (const auto& [j, v] : urow) {
      uc.push_back(j);
      uv.push_back(v);
    }
    up[i + 1] = uc.size();
  }

  return IluFactor(SparseMatrix(n, n, std::move(lp), std::move(lc), std::move(lv)),
                   SparseMatrix(n, n, std::move(up), std::move(uc), std::move(uv)),
                   std::move(diag), repairs, zero_rows);
}

BlockIlu::BlockIlu(std::vector<IluFactor> factors) : factors_(std::move(factors)) {
  offsets_.assign(factors_.size() + 1, 0);
  for (std::size_t i = 0; i < factors_.size(); ++i)
    offsets_[i + 1] = offsets_[i] + factors_[i].size();
}

BlockIlu BlockIlu::factor(std::span<const SparseMatrix> blocks, const IluOptions& opts) {
  std::vector<IluFactor> factors(blocks.size());
  const auto count = static_cast<std::ptrdiff_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) factors[i] = ilut(blocks[i], opts);
  return BlockIlu(std::move(factors));
}

std::size_t BlockIlu::nnz() const noexcept {
  std::size_t total = 0;
  for (const auto& f : factors_) total += f.nnz_l() + f.nnz_u();
  return total;
}

std::size_t BlockIlu::pivot_repairs() const noexcept {
  std::size_t total = 0;
  for (const auto& f : factors_) total += f.pivot_repairs();
  return total;
}

void BlockIlu::solve_in_place(std::span<double> x) const {
  if (x.size() != static_cast<std::size_t>(size()))
    throw DimensionError("block solve: size mismatch");
  const auto count = static_cast<std::ptrdiff_t>(factors_.size());
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    factors_[i].solve_in_place(x.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]));
}

Vector BlockIlu::solve(const Vector& rhs) const {
  Vector x = rhs;
  solve_in_place(as_span(x));
  return x;
}

}  // namespace pslr
