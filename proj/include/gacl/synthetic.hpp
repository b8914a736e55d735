#pragma once

#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"

#include <cstdint>

namespace gacl {

enum class SyntheticKind {
    homophilic_sbm,
    heterophilic_bipartite_monophily,
};

/// Recipe for a labeled test graph with features.
///
/// homophilic_sbm: within-class edge probability p_in, cross-class p_out.
/// heterophilic_bipartite_monophily: nodes are grouped into pods, each pod a
/// bipartite pairing of two distinct classes with edge probability p_out, so
/// every node's neighbors share a single class different from its own.
/// That yields homophily 0 and two-hop monophily 1 by construction
/// (p_in is unused for this kind).
struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::homophilic_sbm;
    Index num_nodes = 64;
    int num_classes = 2;
    double p_in = 0.5;
    double p_out = 0.05;
    Index feature_dim = 16;
    double feature_noise = 0.1;
};

void validate(const SyntheticSpec& spec);

struct SyntheticData {
    Graph graph;
    DenseMatrix features;
};

/// Deterministic in (spec, seed): same bits on every run.
/// Features are the class one-hot (padded or projected to feature_dim)
/// plus zero-mean Gaussian noise of scale feature_noise.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

} // namespace gacl
