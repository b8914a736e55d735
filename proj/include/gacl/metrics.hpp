#pragma once

#include "gacl/encoder.hpp"
#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gacl {

struct GraphStats {
    double homophily = 0.0;
    double two_hop_monophily = 0.0;
    double neighborhood_similarity = 0.0;
    Index num_nodes = 0;
    Index num_edges = 0;
    int num_classes = 0;
};

/// Fraction of undirected edges joining same-class endpoints.
double homophily_ratio(const Graph& g);

/// Per-node mean same-class fraction over exact two-hop neighbors, averaged
/// over nodes with a non-empty two-hop neighborhood.
double two_hop_monophily(const Graph& g);

struct NeighborhoodSimilarity {
    DenseMatrix matrix;       // M x M pairwise class similarity s(m, m')
    double intra_mean = 0.0;  // mean of the diagonal
};

/// Mean cosine similarity of neighbor-label histograms between class pairs.
/// Zero-degree nodes contribute a zero histogram with cos defined as 0.
NeighborhoodSimilarity class_neighborhood_similarity(const Graph& g);

GraphStats graph_stats(const Graph& g);

struct Splits {
    std::vector<Index> train;
    std::vector<Index> val;
    std::vector<Index> test;
};

/// Seeded stratified split by fractions (remainder goes to test).
Splits make_stratified_splits(std::span<const int> labels, double train_frac, double val_frac,
                              std::uint64_t seed);

struct ProbeConfig {
    int epochs = 300;
    double lr = 0.01;
    double weight_decay = 1e-5;
    int num_seeds = 5;
    std::uint64_t seed = 7;
};

struct ProbeResult {
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    std::vector<double> per_seed;
};

/// Multinomial logistic regression on frozen embeddings, full-batch gradient
/// descent, model selection on validation accuracy, test accuracy reported.
ProbeResult linear_probe(const DenseMatrix& embeddings, std::span<const int> labels,
                         int num_classes, const Splits& splits, const ProbeConfig& cfg = {});

/// k-means (k-means++ seeding, 10 restarts, best inertia) followed by NMI
/// against the labels, arithmetic-mean normalization.
double kmeans_nmi(const DenseMatrix& embeddings, std::span<const int> labels, int num_classes,
                  std::uint64_t seed);

/// NMI between two labelings; symmetric, arithmetic-mean normalization.
double normalized_mutual_information(std::span<const int> a, std::span<const int> b);

struct SimilarityHistograms {
    std::vector<double> random_pairs;
    std::vector<double> one_hop;
    std::vector<double> two_hop;
    std::vector<double> predictor_similarity;  // cos(v, g(v)); empty without a predictor
};

/// Cosine similarity samples: uniformly sampled node pairs, all one-hop edges,
/// all two-hop edges (each capped at 10^6 with seeded subsampling), and
/// per-node predictor similarity when a predictor is supplied.
SimilarityHistograms similarity_histograms(const DenseMatrix& embeddings, const Graph& g,
                                           Index num_random_pairs, std::uint64_t seed,
                                           const PredictorParams* predictor = nullptr);

struct EvalReport {
    double probe_accuracy = 0.0;
    double probe_accuracy_std = 0.0;
    double nmi = 0.0;
    SimilarityHistograms histograms;
};

} // namespace gacl
