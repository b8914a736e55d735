#include "gacl/synthetic.hpp"

#include "gacl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gacl {

void validate(const SyntheticSpec& spec) {
    if (spec.num_classes < 2) throw std::invalid_argument("synthetic: num_classes must be >= 2");
    if (spec.num_nodes < static_cast<Index>(spec.num_classes)) {
        throw std::invalid_argument("synthetic: num_nodes must be >= num_classes");
    }
    if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0) {
        throw std::invalid_argument("synthetic: edge probabilities must lie in [0, 1]");
    }
    if (spec.feature_dim == 0) throw std::invalid_argument("synthetic: feature_dim must be >= 1");
    if (spec.feature_noise < 0.0) throw std::invalid_argument("synthetic: feature_noise must be >= 0");
}

namespace {

EdgeList sbm_edges(const SyntheticSpec& spec, std::vector<int>& labels, Rng& rng) {
    const Index n = spec.num_nodes;
    labels.resize(n);
    for (Index v = 0; v < n; ++v) labels[v] = static_cast<int>(v % spec.num_classes);

    EdgeList edges;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
        }
    }
    return edges;
}

// Pod layout: node v sits in pod v % P, on side (v / P) % 2. Side a of pod t
// carries class t mod M, side b class (t+1) mod M. Edges only join the two
// sides of one pod, so neighbors are label-uniform and two-hop neighbors land
// back in the node's own class.
EdgeList monophily_edges(const SyntheticSpec& spec, std::vector<int>& labels, Rng& rng) {
    const Index n = spec.num_nodes;
    const Index m = static_cast<Index>(spec.num_classes);
    Index pods = std::max<Index>(1, (n / (32 * m)) * m);
    pods = std::max<Index>(pods, std::min<Index>(m, std::max<Index>(1, n / 4)));
    pods = std::min(pods, std::max<Index>(1, n / 4));

    labels.resize(n);
    std::vector<std::vector<Index>> side_a(pods), side_b(pods);
    for (Index v = 0; v < n; ++v) {
        const Index t = v % pods;
        const bool a = ((v / pods) % 2) == 0;
        labels[v] = static_cast<int>(a ? t % m : (t + 1) % m);
        (a ? side_a : side_b)[t].push_back(v);
    }

    EdgeList edges;
    for (Index t = 0; t < pods; ++t) {
        for (Index u : side_a[t]) {
            for (Index w : side_b[t]) {
                if (rng.bernoulli(spec.p_out)) edges.emplace_back(u, w);
            }
        }
    }
    return edges;
}

DenseMatrix class_features(const SyntheticSpec& spec, std::span<const int> labels, Rng& rng) {
    const Index m = static_cast<Index>(spec.num_classes);
    const Index d = spec.feature_dim;

    // Class anchor rows: one-hot when the dimension allows, otherwise a
    // seeded Gaussian projection of the one-hot.
    DenseMatrix anchors(m, d);
    if (d >= m) {
        for (Index c = 0; c < m; ++c) anchors.at(c, c) = 1.0;
    } else {
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));
        for (Index c = 0; c < m; ++c) {
            for (Index j = 0; j < d; ++j) anchors.at(c, j) = scale * rng.normal();
        }
    }

    DenseMatrix x(static_cast<Index>(labels.size()), d);
    for (Index v = 0; v < x.rows; ++v) {
        const double* base = anchors.row(static_cast<Index>(labels[v]));
        double* row = x.row(v);
        for (Index j = 0; j < d; ++j) row[j] = base[j] + spec.feature_noise * rng.normal();
    }
    return x;
}

} // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(spec.kind)));

    std::vector<int> labels;
    EdgeList edges = spec.kind == SyntheticKind::homophilic_sbm
                         ? sbm_edges(spec, labels, rng)
                         : monophily_edges(spec, labels, rng);

    SyntheticData data;
    data.graph = build_graph(edges, spec.num_nodes, labels, spec.num_classes);
    data.features = class_features(spec, labels, rng);
    return data;
}

} // namespace gacl
