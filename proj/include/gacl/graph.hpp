#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gacl {

using Index = std::uint32_t;
using EdgeList = std::vector<std::pair<Index, Index>>;

/// Immutable undirected graph in compressed row form, optional node labels.
///
/// Invariants (established by build_graph, assumed everywhere else):
///  - symmetric: (u,v) stored iff (v,u) stored
///  - no self loops
///  - col_indices strictly increasing within each row
///  - labels empty, or labels.size() == num_nodes with every id < num_classes
struct Graph {
    Index num_nodes = 0;
    std::vector<Index> row_offsets;  // size num_nodes + 1
    std::vector<Index> col_indices;  // both directions of every edge
    std::vector<int> labels;         // empty when absent
    int num_classes = 0;             // 0 when labels absent

    Index degree(Index v) const { return row_offsets[v + 1] - row_offsets[v]; }

    std::span<const Index> neighbors(Index v) const {
        return {col_indices.data() + row_offsets[v], col_indices.data() + row_offsets[v + 1]};
    }

    /// Number of undirected edges (each counted once).
    Index num_edges() const { return static_cast<Index>(col_indices.size() / 2); }

    bool has_labels() const { return !labels.empty(); }
};

/// CSR matrix sharing the Graph layout plus per-entry values.
struct SparseMatrix {
    Index rows = 0;
    Index cols = 0;
    std::vector<Index> row_offsets;
    std::vector<Index> col_indices;
    std::vector<double> values;
};

/// Builds a canonical Graph from an edge list: inserts both directions,
/// drops self-loops, merges duplicates. Node ids must be < num_nodes;
/// label ids must be < num_classes (num_classes == 0 derives it as max+1).
Graph build_graph(const EdgeList& edges, Index num_nodes,
                  std::span<const int> labels = {}, int num_classes = 0);

/// A_hat = D^{-1/2} A D^{-1/2}; rows of isolated nodes stay empty.
SparseMatrix normalized_adjacency(const Graph& g);

/// Unweighted graph of nodes exactly two hops apart: (i,k) is an edge iff
/// i != k and some j is adjacent to both. Labels carried over.
Graph two_hop_graph(const Graph& g);

/// Undirected edges as (u,v) pairs with u < v, in row order.
EdgeList undirected_edges(const Graph& g);

} // namespace gacl
