#include "pslr/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pslr/error.hpp"

namespace pslr {

Vector seeded_random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0,1)
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<std::size_t> row_ptr,
                           std::vector<Index> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) throw DimensionError("negative matrix dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1)
    throw DimensionError("row_ptr must have rows + 1 entries");
  if (row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size())
    throw DimensionError("row_ptr does not match the declared nonzero count");
  for (Index i = 0; i < rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw DimensionError("row_ptr not monotone");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
        throw DimensionError("column index out of range in row " + std::to_string(i));
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw DimensionError("column indices not strictly increasing in row " +
                             std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::span<const Triplet> entries) {
  std::vector<std::size_t> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("triplet index out of range");
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  std::vector<Index> cols_tmp(entries.size());
  std::vector<double> vals_tmp(entries.size());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (const auto& t : entries) {
    cols_tmp[fill[t.row]] = t.col;
    vals_tmp[fill[t.row]++] = t.value;
  }

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  std::vector<std::size_t> order;
  for (Index i = 0; i < rows; ++i) {
    order.resize(count[i + 1] - count[i]);
    std::iota(order.begin(), order.end(), count[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cols_tmp[a] < cols_tmp[b]; });
    for (std::size_t k : order) {
      if (!col_idx.empty() && values.size() > row_ptr[i] && col_idx.back() == cols_tmp[k]) {
        values.back() += vals_tmp[k];
      } else {
        col_idx.push_back(cols_tmp[k]);
        values.push_back(vals_tmp[k]);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::vector<Index> col_idx(n);
  std::iota(col_idx.begin(), col_idx.end(), Index{0});
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                      std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zeros(Index rows, Index cols) {
  return SparseMatrix(rows, cols, std::vector<std::size_t>(static_cast<std::size_t>(rows) + 1, 0),
                      {}, {});
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense, double drop) {
  const auto rows = static_cast<Index>(dense.rows());
  const auto cols = static_cast<Index>(dense.cols());
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double v = dense(i, j);
      if (v != 0.0 && std::abs(v) > drop) {
        col_idx.push_back(j);
        values.push_back(v);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrix::at(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("entry out of range");
  const auto c = row_cols(i);
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + static_cast<std::size_t>(it - c.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++row_ptr[c + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<Index> col_idx(nnz());
  std::vector<double> values(nnz());
  std::vector<std::size_t> fill(row_ptr.begin(), row_ptr.end() - 1);
  for (Index i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = fill[col_idx_[k]]++;
      col_idx[dst] = i;
      values[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

Permutation::Permutation(std::vector<Index> forward)
    : forward_(std::move(forward)), inverse_(forward_.size(), -1) {
  const auto n = static_cast<Index>(forward_.size());
  for (Index i = 0; i < n; ++i) {
    const Index t = forward_[i];
    if (t < 0 || t >= n || inverse_[t] != -1)
      throw DimensionError("permutation is not a bijection");
    inverse_[t] = i;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> f(n);
  std::iota(f.begin(), f.end(), Index{0});
  return Permutation(std::move(f));
}

Permutation Permutation::inverted() const { return Permutation(inverse_); }

Vector Permutation::apply(const Vector& v) const {
  if (v.size() != size()) throw DimensionError("permutation size mismatch");
  Vector out(v.size());
  for (Index i = 0; i < size(); ++i) out[forward_[i]] = v[i];
  return out;
}

Vector Permutation::apply_inverse(const Vector& v) const {
  if (v.size() != size()) throw DimensionError("permutation size mismatch");
  Vector out(v.size());
  for (Index i = 0; i < size(); ++i) out[i] = v[forward_[i]];
  return out;
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.cols()) ||
      y.size() != static_cast<std::size_t>(a.rows()))
    throw DimensionError("matvec: dimension mismatch");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  const Index n = a.rows();
#pragma omp parallel for schedule(static) if (n > 4096)
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) sum += va[k] * x[ci[k]];
    y[i] = sum;
  }
}

Vector matvec(const SparseMatrix& a, const Vector& x) {
  Vector y(a.rows());
  matvec(a, as_span(x), as_span(y));
  return y;
}

void matvec_add(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
                double alpha) {
  if (x.size() != static_cast<std::size_t>(a.cols()) ||
      y.size() != static_cast<std::size_t>(a.rows()))
    throw DimensionError("matvec_add: dimension mismatch");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  const Index n = a.rows();
#pragma omp parallel for schedule(static) if (n > 4096)
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) sum += va[k] * x[ci[k]];
    y[i] += alpha * sum;
  }
}

SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p) {
  if (!a.is_square()) throw DimensionError("permute_symmetric: matrix not square");
  if (p.size() != a.rows()) throw DimensionError("permute_symmetric: permutation size mismatch");
  const Index n = a.rows();
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (Index r = 0; r < n; ++r) row_ptr[r + 1] = row_ptr[r] + a.row_cols(p.inverse(r)).size();
  std::vector<Index> col_idx(a.nnz());
  std::vector<double> values(a.nnz());
  std::vector<std::pair<Index, double>> row;
  for (Index r = 0; r < n; ++r) {
    const Index old = p.inverse(r);
    const auto c = a.row_cols(old);
    const auto v = a.row_values(old);
    row.clear();
    for (std::size_t k = 0; k < c.size(); ++k) row.emplace_back(p(c[k]), v[k]);
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      col_idx[row_ptr[r] + k] = row[k].first;
      values[row_ptr[r] + k] = row[k].second;
    }
  }
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

namespace {

void check_index_set(std::span<const Index> set, Index bound, const char* what) {
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k] < 0 || set[k] >= bound)
      throw DimensionError(std::string("extract_submatrix: ") + what + " index out of range");
    if (k > 0 && set[k] <= set[k - 1])
      throw DimensionError(std::string("extract_submatrix: ") + what + " set not sorted");
  }
}

}  // namespace

SparseMatrix extract_submatrix(const SparseMatrix& a, std::span<const Index> rows,
                               std::span<const Index> cols) {
  check_index_set(rows, a.rows(), "row");
  check_index_set(cols, a.cols(), "column");
  std::vector<Index> col_map(a.cols(), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) col_map[cols[k]] = static_cast<Index>(k);

  std::vector<std::size_t> row_ptr(rows.size() + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto c = a.row_cols(rows[r]);
    const auto v = a.row_values(rows[r]);
    for (std::size_t k = 0; k < c.size(); ++k) {
      // cols is sorted, so mapped indices stay increasing
      if (const Index m = col_map[c[k]]; m >= 0) {
        col_idx.push_back(m);
        values.push_back(v[k]);
      }
    }
    row_ptr[r + 1] = col_idx.size();
  }
  return SparseMatrix(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()),
                      std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix extract_block(const SparseMatrix& a, Index row_begin, Index row_end,
                           Index col_begin, Index col_end) {
  if (row_begin < 0 || row_end < row_begin || row_end > a.rows() || col_begin < 0 ||
      col_end < col_begin || col_end > a.cols())
    throw DimensionError("extract_block: range out of bounds");
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(row_end - row_begin) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = row_begin; i < row_end; ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_values(i);
    auto lo = std::lower_bound(c.begin(), c.end(), col_begin);
    for (auto it = lo; it != c.end() && *it < col_end; ++it) {
      col_idx.push_back(*it - col_begin);
      values.push_back(v[static_cast<std::size_t>(it - c.begin())]);
    }
    row_ptr[i - row_begin + 1] = col_idx.size();
  }
  return SparseMatrix(row_end - row_begin, col_end - col_begin, std::move(row_ptr),
                      std::move(col_idx), std::move(values));
}

SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("subtract: shape mismatch");
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = 0; i < a.rows(); ++i) {
    const auto ac = a.row_cols(i);
    const auto av = a.row_values(i);
    const auto bc = b.row_cols(i);
    const auto bv = b.row_values(i);
    std::size_t x = 0, y = 0;
    auto emit = [&](Index c, double v) {
      if (v != 0.0) {
        col_idx.push_back(c);
        values.push_back(v);
      }
    };
    while (x < ac.size() || y < bc.size()) {
      if (y == bc.size() || (x < ac.size() && ac[x] < bc[y])) {
        emit(ac[x], av[x]);
        ++x;
      } else if (x == ac.size() || bc[y] < ac[x]) {
        emit(bc[y], -bv[y]);
        ++y;
      } else {
        emit(ac[x], av[x] - bv[y]);
        ++x;
        ++y;
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

double frobenius_norm(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace pslr
