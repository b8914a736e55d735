#include "gacl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gacl {

Graph build_graph(const EdgeList& edges, Index num_nodes,
                  std::span<const int> labels, int num_classes) {
    EdgeList dir;
    dir.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
        if (u >= num_nodes || v >= num_nodes) {
            throw std::out_of_range("build_graph: node id " + std::to_string(std::max(u, v)) +
                                    " out of range [0, " + std::to_string(num_nodes) + ")");
        }
        if (u == v) continue;
        dir.emplace_back(u, v);
        dir.emplace_back(v, u);
    }
    std::sort(dir.begin(), dir.end());
    dir.erase(std::unique(dir.begin(), dir.end()), dir.end());

    Graph g;
    g.num_nodes = num_nodes;
    g.row_offsets.assign(num_nodes + 1, 0);
    for (const auto& [u, v] : dir) g.row_offsets[u + 1]++;
    for (Index i = 0; i < num_nodes; ++i) g.row_offsets[i + 1] += g.row_offsets[i];
    g.col_indices.reserve(dir.size());
    for (const auto& [u, v] : dir) g.col_indices.push_back(v);

    if (!labels.empty()) {
        if (labels.size() != num_nodes) {
            throw std::invalid_argument("build_graph: " + std::to_string(labels.size()) +
                                        " labels for " + std::to_string(num_nodes) + " nodes");
        }
        int max_label = 0;
        for (int y : labels) {
            if (y < 0) throw std::invalid_argument("build_graph: negative label");
            max_label = std::max(max_label, y);
        }
        if (num_classes == 0) num_classes = max_label + 1;
        if (max_label >= num_classes) {
            throw std::invalid_argument("build_graph: label " + std::to_string(max_label) +
                                        " >= declared class count " + std::to_string(num_classes));
        }
        g.labels.assign(labels.begin(), labels.end());
        g.num_classes = num_classes;
    }
    return g;
}

SparseMatrix normalized_adjacency(const Graph& g) {
    std::vector<double> inv_sqrt_deg(g.num_nodes, 0.0);
    for (Index v = 0; v < g.num_nodes; ++v) {
        const Index d = g.degree(v);
        if (d > 0) inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(d));
    }
    SparseMatrix a;
    a.rows = a.cols = g.num_nodes;
    a.row_offsets = g.row_offsets;
    a.col_indices = g.col_indices;
    a.values.resize(g.col_indices.size());
    for (Index v = 0; v < g.num_nodes; ++v) {
        for (Index e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
            a.values[e] = inv_sqrt_deg[v] * inv_sqrt_deg[g.col_indices[e]];
        }
    }
    return a;
}

Graph two_hop_graph(const Graph& g) {
    // Stamped scan: for each i, mark all k reachable via some shared j.
    std::vector<Index> stamp(g.num_nodes, 0);
    std::vector<Index> reached;
    EdgeList two_hop;
    for (Index i = 0; i < g.num_nodes; ++i) {
        const Index tag = i + 1;
        reached.clear();
        for (Index j : g.neighbors(i)) {
            for (Index k : g.neighbors(j)) {
                if (k == i || stamp[k] == tag) continue;
                stamp[k] = tag;
                reached.push_back(k);
            }
        }
        for (Index k : reached) {
            if (i < k) two_hop.emplace_back(i, k);
        }
    }
    return build_graph(two_hop, g.num_nodes, g.labels, g.num_classes);
}

EdgeList undirected_edges(const Graph& g) {
    EdgeList out;
    out.reserve(g.num_edges());
    for (Index u = 0; u < g.num_nodes; ++u) {
        for (Index v : g.neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

} // namespace gacl
