#include <doctest.h>

#include "gacl/metrics.hpp"
#include "gacl/synthetic.hpp"

#include <stdexcept>

using namespace gacl;

TEST_CASE("bipartite-monophily graph has homophily 0 and monophily 1") {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::heterophilic_bipartite_monophily;
    spec.num_nodes = 64;
    spec.num_classes = 2;
    spec.p_out = 1.0;
    const SyntheticData data = generate_synthetic(spec, 42);
    CHECK(homophily_ratio(data.graph) == 0.0);
    CHECK(two_hop_monophily(data.graph) == 1.0);
}

TEST_CASE("bipartite-monophily holds for more classes and sparser pods") {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::heterophilic_bipartite_monophily;
    spec.num_nodes = 200;
    spec.num_classes = 5;
    spec.p_out = 0.6;
    const SyntheticData data = generate_synthetic(spec, 9);
    CHECK(homophily_ratio(data.graph) == 0.0);
    CHECK(two_hop_monophily(data.graph) == 1.0);
}

TEST_CASE("pure SBM with p_in=1, p_out=0 has homophily 1") {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::homophilic_sbm;
    spec.num_nodes = 32;
    spec.num_classes = 2;
    spec.p_in = 1.0;
    spec.p_out = 0.0;
    const SyntheticData data = generate_synthetic(spec, 1);
    CHECK(homophily_ratio(data.graph) == 1.0);
}

TEST_CASE("SBM edge densities track p_in and p_out") {
    SyntheticSpec spec;
    spec.num_nodes = 300;
    spec.num_classes = 3;
    spec.p_in = 0.3;
    spec.p_out = 0.02;
    const SyntheticData data = generate_synthetic(spec, 5);
    const double h = homophily_ratio(data.graph);
    CHECK(h > 0.7);  // within-class edges dominate at these densities
    CHECK(h < 1.0);
}

TEST_CASE("generation is bit-reproducible") {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::heterophilic_bipartite_monophily;
    spec.num_nodes = 100;
    spec.num_classes = 4;
    spec.p_out = 0.5;
    spec.feature_noise = 0.3;
    const SyntheticData a = generate_synthetic(spec, 77);
    const SyntheticData b = generate_synthetic(spec, 77);
    CHECK(a.graph.col_indices == b.graph.col_indices);
    CHECK(a.graph.row_offsets == b.graph.row_offsets);
    CHECK(a.graph.labels == b.graph.labels);
    CHECK(a.features.data == b.features.data);

    const SyntheticData c = generate_synthetic(spec, 78);
    CHECK(a.graph.col_indices != c.graph.col_indices);
}

TEST_CASE("features carry class structure") {
    SyntheticSpec spec;
    spec.num_nodes = 20;
    spec.num_classes = 4;
    spec.feature_dim = 8;
    spec.feature_noise = 0.0;
    const SyntheticData data = generate_synthetic(spec, 3);
    REQUIRE(data.features.rows == 20);
    REQUIRE(data.features.cols == 8);
    for (Index v = 0; v < 20; ++v) {
        for (Index j = 0; j < 8; ++j) {
            const double expected = (static_cast<int>(j) == data.graph.labels[v]) ? 1.0 : 0.0;
            CHECK(data.features.at(v, j) == expected);
        }
    }
}

TEST_CASE("feature_dim below class count falls back to a projection") {
    SyntheticSpec spec;
    spec.num_nodes = 30;
    spec.num_classes = 6;
    spec.feature_dim = 3;
    spec.feature_noise = 0.0;
    const SyntheticData data = generate_synthetic(spec, 3);
    CHECK(data.features.cols == 3);
    // same class, same projected anchor
    for (Index v = 0; v < 30; ++v) {
        for (Index w = v + 1; w < 30; ++w) {
            if (data.graph.labels[v] != data.graph.labels[w]) continue;
            for (Index j = 0; j < 3; ++j) {
                CHECK(data.features.at(v, j) == data.features.at(w, j));
            }
        }
    }
}

TEST_CASE("invalid specs are rejected") {
    SyntheticSpec spec;
    spec.num_classes = 1;
    CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
    spec.num_classes = 8;
    spec.num_nodes = 4;
    CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
    spec.num_nodes = 64;
    spec.p_in = 1.5;
    CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
}
