#include "pslr/partition.hpp"

#include <algorithm>
#include <string>

#include "pslr/error.hpp"

namespace pslr {

Adjacency symmetrized_adjacency(const SparseMatrix& a) {
  if (!a.is_square()) throw DimensionError("adjacency: matrix not square");
  const Index n = a.rows();
  std::vector<std::size_t> degree(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i)
    for (Index j : a.row_cols(i))
      if (j != i) {
        ++degree[i + 1];
        ++degree[j + 1];
      }
  for (Index i = 0; i < n; ++i) degree[i + 1] += degree[i];

  std::vector<Index> raw(degree.back());
  std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
  for (Index i = 0; i < n; ++i)
    for (Index j : a.row_cols(i))
      if (j != i) {
        raw[fill[i]++] = j;
        raw[fill[j]++] = i;
      }

  Adjacency adj;
  adj.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  adj.neighbors.reserve(raw.size());
  for (Index i = 0; i < n; ++i) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(degree[i]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(degree[i + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    adj.neighbors.insert(adj.neighbors.end(), first, last);
    adj.offsets[i + 1] = adj.neighbors.size();
  }
  return adj;
}

namespace {

class Bisector {
 public:
  Bisector(const Adjacency& adj, std::vector<int>& assignment)
      : adj_(adj), assignment_(assignment), set_id_(adj.size(), -1), visited_(adj.size(), 0) {}

  void split(std::vector<Index> vertices, int parts, int first_part) {
    if (parts == 1) {
      for (Index v : vertices) assignment_[v] = first_part;
      return;
    }
    const int left_parts = parts / 2;
    const int right_parts = parts - left_parts;
    const auto size = static_cast<long long>(vertices.size());
    long long target = size * left_parts / parts;
    target = std::clamp<long long>(target, left_parts, size - right_parts);

    const std::vector<Index> order = bfs_order(vertices);
    std::vector<Index> left(order.begin(), order.begin() + target);
    std::vector<Index> right(order.begin() + target, order.end());
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    split(std::move(left), left_parts, first_part);
    split(std::move(right), right_parts, first_part + left_parts);
  }

 private:
  // Level-set order over `vertices` (sorted ascending).
  std::vector<Index> bfs_order(const std::vector<Index>& vertices) {
    const int tag = ++tag_;
    for (Index v : vertices) set_id_[v] = tag;
    std::vector<Index> order;
    order.reserve(vertices.size());
    std::size_t next_root = 0;
    while (order.size() < vertices.size()) {
      while (visited_[vertices[next_root]] == tag) ++next_root;
      const Index root = vertices[next_root];
      visited_[root] = tag;
      std::size_t head = order.size();
      order.push_back(root);
      while (head < order.size()) {
        const Index v = order[head++];
        for (Index w : adj_.of(v)) {
          if (set_id_[w] == tag && visited_[w] != tag) {
            visited_[w] = tag;
            order.push_back(w);
          }
        }
      }
    }
    return order;
  }

  const Adjacency& adj_;
  std::vector<int>& assignment_;
  std::vector<int> set_id_;
  std::vector<int> visited_;
  int tag_ = 0;
};

}  // namespace

PartitionSpec partition_graph(const SparseMatrix& a, int num_parts, std::uint64_t seed) {
  if (!a.is_square()) throw DimensionError("partition_graph: matrix not square");
  if (num_parts < 1) throw Error("partition_graph: need at least one subdomain");
  if (num_parts > a.rows())
    throw Error("partition_graph: " + std::to_string(num_parts) + " subdomains for " +
                std::to_string(a.rows()) + " vertices");

  PartitionSpec spec;
  spec.num_parts = num_parts;
  spec.seed = seed;
  spec.assignment.assign(a.rows(), 0);
  if (num_parts == 1) return spec;

  const Adjacency adj = symmetrized_adjacency(a);
  std::vector<Index> all(a.rows());
  for (Index i = 0; i < a.rows(); ++i) all[i] = i;
  Bisector(adj, spec.assignment).split(std::move(all), num_parts, 0);
  return spec;
}

SparseMatrix PartitionedSystem::reassemble() const {
  std::vector<Triplet> t;
  t.reserve(B.nnz() + E.nnz() + F.nnz() + C.nnz());
  auto add = [&](const SparseMatrix& m, Index r0, Index c0) {
    for (Index i = 0; i < m.rows(); ++i) {
      const auto c = m.row_cols(i);
      const auto v = m.row_values(i);
      for (std::size_t k = 0; k < c.size(); ++k) t.push_back({i + r0, c[k] + c0, v[k]});
    }
  };
  add(B, 0, 0);
  add(E, 0, p);
  add(F, p, 0);
  add(C, p, p);
  return SparseMatrix::from_triplets(n, n, t);
}

PartitionedSystem classify_and_reorder(const SparseMatrix& a, const PartitionSpec& spec) {
  if (!a.is_square()) throw DimensionError("classify_and_reorder: matrix not square");
  if (spec.assignment.size() != static_cast<std::size_t>(a.rows()))
    throw DimensionError("classify_and_reorder: partition does not cover the matrix");
  const Index n = a.rows();
  const int s = spec.num_parts;
  for (int part : spec.assignment)
    if (part < 0 || part >= s) throw Error("classify_and_reorder: subdomain id out of range");

  const Adjacency adj = symmetrized_adjacency(a);
  std::vector<char> is_interface(n, 0);
  for (Index v = 0; v < n; ++v)
    for (Index w : adj.of(v))
      if (spec.assignment[w] != spec.assignment[v]) {
        is_interface[v] = 1;
        break;
      }

  PartitionedSystem ps;
  ps.n = n;
  ps.num_parts = s;
  ps.interior_vertices.resize(s);
  ps.interface_vertices.resize(s);
  for (Index v = 0; v < n; ++v) {
    auto& bucket = is_interface[v] ? ps.interface_vertices : ps.interior_vertices;
    bucket[spec.assignment[v]].push_back(v);
  }

  std::vector<Index> forward(n);
  ps.interior_offsets.assign(s + 1, 0);
  ps.interface_offsets.assign(s + 1, 0);
  Index next = 0;
  for (int i = 0; i < s; ++i) {
    for (Index v : ps.interior_vertices[i]) forward[v] = next++;
    ps.interior_offsets[i + 1] = next;
  }
  ps.p = next;
  for (int i = 0; i < s; ++i) {
    for (Index v : ps.interface_vertices[i]) forward[v] = next++;
    ps.interface_offsets[i + 1] = next - ps.p;
  }
  ps.q = n - ps.p;
  ps.perm = Permutation(std::move(forward));

  ps.reordered = permute_symmetric(a, ps.perm);
  ps.B = extract_block(ps.reordered, 0, ps.p, 0, ps.p);
  ps.E = extract_block(ps.reordered, 0, ps.p, ps.p, n);
  ps.F = extract_block(ps.reordered, ps.p, n, 0, ps.p);
  ps.C = extract_block(ps.reordered, ps.p, n, ps.p, n);
  ps.B_blocks.reserve(s);
  ps.C_blocks.reserve(s);
  for (int i = 0; i < s; ++i) {
    ps.B_blocks.push_back(extract_block(ps.B, ps.interior_offsets[i], ps.interior_offsets[i + 1],
                                        ps.interior_offsets[i], ps.interior_offsets[i + 1]));
    ps.C_blocks.push_back(extract_block(ps.C, ps.interface_offsets[i],
                                        ps.interface_offsets[i + 1], ps.interface_offsets[i],
                                        ps.interface_offsets[i + 1]));
  }
  return ps;
}

}  // namespace pslr
