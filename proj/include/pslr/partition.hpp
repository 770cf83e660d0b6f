#pragma once

#include <cstdint>
#include <vector>

#include "pslr/sparse.hpp"

namespace pslr {

/// Vertex -> subdomain assignment.
struct PartitionSpec {
  int num_parts = 1;
  std::vector<int> assignment;
  std::uint64_t seed = 0;
};

/// Symmetrized adjacency (pattern of A + A^T without the diagonal) as
/// sorted neighbour lists in CSR form.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<Index> neighbors;

  Index size() const noexcept { return static_cast<Index>(offsets.size()) - 1; }
  std::span<const Index> of(Index v) const noexcept {
    return {neighbors.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
};

Adjacency symmetrized_adjacency(const SparseMatrix& a);

/// k-way edge-separator partition by recursive level-set (BFS) bisection.
///
/// Each bisection runs BFS inside the current vertex set starting from its
/// smallest-index unvisited vertex (restarting the same way when a
/// component is exhausted) and cuts the visit order so the two halves are
/// sized in proportion to the number of parts each half still has to
/// produce. Deterministic in (A, s); the seed is only recorded.
PartitionSpec partition_graph(const SparseMatrix& a, int num_parts, std::uint64_t seed = 0);

/// The reordered system
///
///   [ B  E ] [x]   [f]
///   [ F  C ] [y] = [g]
///
/// with subdomain interiors numbered first (contiguously, subdomain by
/// subdomain) and all interface unknowns last.
struct PartitionedSystem {
  Index n = 0;
  Index p = 0;  ///< interior unknowns
  Index q = 0;  ///< interface unknowns
  int num_parts = 0;

  Permutation perm;  ///< original index -> reordered index
  /// Subdomain i owns interior rows [interior_offsets[i], interior_offsets[i+1])
  /// and interface rows [interface_offsets[i], interface_offsets[i+1]) of C.
  std::vector<Index> interior_offsets;
  std::vector<Index> interface_offsets;
  /// Original vertex ids per subdomain, in reordered order.
  std::vector<std::vector<Index>> interior_vertices;
  std::vector<std::vector<Index>> interface_vertices;

  SparseMatrix reordered;  ///< full permuted matrix
  SparseMatrix B, E, F, C;
  std::vector<SparseMatrix> B_blocks;  ///< B_i
  std::vector<SparseMatrix> C_blocks;  ///< C_i

  /// [[B, E], [F, C]] as one n x n matrix in reordered numbering.
  SparseMatrix reassemble() const;
};

/// Marks a vertex as interface when it has an off-diagonal neighbour (in the
/// pattern of A + A^T) owned by another subdomain, then builds the blocks.
PartitionedSystem classify_and_reorder(const SparseMatrix& a, const PartitionSpec& spec);

}  // namespace pslr
